#include "hvl/model.hpp"

#include "hvl/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace hvl {

namespace {

constexpr double kSingularExponent = -2.0;

} // namespace

PotentialSpec PotentialSpec::coulomb(double alpha, CoulombSign sign)
{
    PotentialSpec p;
    p.kind = Kind::Coulomb;
    p.alpha = alpha;
    p.sign = sign;
    return p;
}

PotentialSpec PotentialSpec::power_law(double V0, double n)
{
    PotentialSpec p;
    p.kind = Kind::PowerLaw;
    p.V0 = V0;
    p.n = n;
    return p;
}

PotentialSpec PotentialSpec::inverse_square(double V0)
{
    PotentialSpec p;
    p.kind = Kind::InverseSquare;
    p.V0 = V0;
    return p;
}

PotentialSpec PotentialSpec::sum(std::vector<PotentialSpec> terms)
{
    PotentialSpec p;
    p.kind = Kind::Sum;
    p.terms = std::move(terms);
    return p;
}

void PotentialSpec::validate() const
{
    switch (kind) {
    case Kind::Coulomb:
        if (!std::isfinite(alpha) || alpha < 0.0) {
            throw Error(ErrorKind::Classification, "Coulomb coupling must be finite and >= 0");
        }
        return;
    case Kind::PowerLaw:
        if (!std::isfinite(V0) || !std::isfinite(n)) {
            throw Error(ErrorKind::Classification, "power-law strength and exponent must be finite");
        }
        return;
    case Kind::InverseSquare:
        if (!std::isfinite(V0) || !(V0 > 0.0)) {
            throw Error(ErrorKind::Classification, "inverse-square strength must be > 0");
        }
        return;
    case Kind::Sum:
        for (const auto& t : terms) {
            t.validate();
        }
        return;
    }
    throw Error(ErrorKind::Classification, "unknown potential kind");
}

PowerLogSeries PotentialSpec::series() const
{
    switch (kind) {
    case Kind::Coulomb:
        return PowerLogSeries::monomial(sign == CoulombSign::Attractive ? -alpha : alpha, -1.0);
    case Kind::PowerLaw:
        return PowerLogSeries::monomial(V0, n);
    case Kind::InverseSquare:
        return PowerLogSeries::monomial(-V0, -2.0);
    case Kind::Sum: {
        PowerLogSeries total;
        for (const auto& t : terms) {
            total += t.series();
        }
        return total;
    }
    }
    return {};
}

double PotentialSpec::value(double r) const { return series()(r); }

double PotentialSpec::derivative(double r) const { return series().derivative()(r); }

std::vector<PotentialSpec> PotentialSpec::leaves() const
{
    if (kind != Kind::Sum) {
        return {*this};
    }
    std::vector<PotentialSpec> out;
    for (const auto& t : terms) {
        auto sub = t.leaves();
        out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
}

std::string PotentialSpec::describe() const
{
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
    case Kind::Coulomb:
        os << "coulomb(alpha=" << alpha << ", "
           << (sign == CoulombSign::Attractive ? "attractive" : "repulsive") << ")";
        break;
    case Kind::PowerLaw:
        os << "power_law(V0=" << V0 << ", n=" << n << ")";
        break;
    case Kind::InverseSquare:
        os << "inverse_square(V0=" << V0 << ")";
        break;
    case Kind::Sum:
        os << "sum(";
        for (std::size_t i = 0; i < terms.size(); ++i) {
            os << (i ? ", " : "") << terms[i].describe();
        }
        os << ")";
        break;
    }
    return os.str();
}

std::string to_string(EquationKind::Type type)
{
    switch (type) {
    case EquationKind::Type::Schroedinger:
        return "schroedinger";
    case EquationKind::Type::KleinGordonOneBody:
        return "kg_one_body";
    case EquationKind::Type::KleinGordonTwoBody:
        return "kg_two_body";
    }
    return "unknown";
}

void RadialProblem::validate() const
{
    if (!(equation.m > 0.0) || !std::isfinite(equation.m)) {
        throw Error(ErrorKind::Classification, "mass must be finite and > 0");
    }
    if (l < 0) {
        throw Error(ErrorKind::Classification, "angular momentum l must be >= 0");
    }
    potential.validate();
}

const char* RadialProblem::eigenparameter_name() const
{
    return equation.type == EquationKind::Type::KleinGordonTwoBody ? "M" : "E";
}

std::array<PowerLogSeries, 3> coefficient_polynomial(const RadialProblem& problem)
{
    const PowerLogSeries v = problem.potential.series();
    const double m = problem.equation.m;
    switch (problem.equation.type) {
    case EquationKind::Type::Schroedinger:
        return {-2.0 * m * v, PowerLogSeries::constant(2.0 * m), PowerLogSeries{}};
    case EquationKind::Type::KleinGordonOneBody:
        return {v * v - PowerLogSeries::constant(m * m), -2.0 * v, PowerLogSeries::constant(1.0)};
    case EquationKind::Type::KleinGordonTwoBody:
        return {0.25 * (v * v) - PowerLogSeries::constant(m * m), -0.5 * v,
                PowerLogSeries::constant(0.25)};
    }
    throw Error(ErrorKind::Classification, "unknown equation kind");
}

EffectiveCoefficient::EffectiveCoefficient(PowerLogSeries a, double eigenparameter)
    : a_(std::move(a)), da_(a_.derivative()), eps_(eigenparameter)
{
}

PowerLogSeries EffectiveCoefficient::with_centrifugal(int l) const
{
    return a_ - PowerLogSeries::monomial(static_cast<double>(l) * (l + 1), -2.0);
}

EffectiveCoefficient build_effective_coefficient(const RadialProblem& problem, double eigenparameter)
{
    const auto poly = coefficient_polynomial(problem);
    return EffectiveCoefficient(poly[0] + eigenparameter * poly[1] +
                                    (eigenparameter * eigenparameter) * poly[2],
                                eigenparameter);
}

std::string to_string(SingularityClass::Kind kind)
{
    switch (kind) {
    case SingularityClass::Kind::Regular:
        return "regular";
    case SingularityClass::Kind::Singular:
        return "singular";
    case SingularityClass::Kind::SingularLog:
        return "singular_log";
    case SingularityClass::Kind::StandardOnly:
        return "standard_only";
    case SingularityClass::Kind::Supercritical:
        return "supercritical";
    }
    return "unknown";
}

SingularityClass classify_singularity(const RadialProblem& problem)
{
    problem.validate();
    const auto poly = coefficient_polynomial(problem);
    constexpr double tol = PowerLogSeries::kExponentTol;
    if (poly[0].min_exponent() < kSingularExponent - tol) {
        throw Error(ErrorKind::Classification,
                    "effective coefficient is more singular than r^-2 at the origin");
    }
    for (int k = 1; k < 3; ++k) {
        if (poly[k].min_exponent() <= kSingularExponent + tol) {
            throw Error(ErrorKind::Classification,
                        "r^-2 part of the effective coefficient depends on the eigenparameter");
        }
    }
    for (const auto& t : poly[0].terms()) {
        if (t.log_power != 0) {
            throw Error(ErrorKind::Classification, "logarithmic potential terms are not supported");
        }
    }

    SingularityClass out;
    const double half = problem.l + 0.5;
    out.c = poly[0].coefficient(kSingularExponent);
    out.radicand = half * half - out.c;
    using K = SingularityClass::Kind;
    if (out.c == 0.0) {
        out.kind = K::Regular;
        out.P = half;
        return out;
    }
    if (std::abs(out.radicand) <= kLogRadicandTol) {
        out.kind = K::SingularLog;
        out.radicand = 0.0;
        out.P = 0.0;
        return out;
    }
    if (out.radicand < 0.0) {
        out.kind = K::Supercritical;
        out.P = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    out.P = std::sqrt(out.radicand);
    out.kind = out.P < 0.5 ? K::Singular : K::StandardOnly;
    return out;
}

double potential_at_infinity(const PotentialSpec& potential)
{
    const PowerLogSeries series = potential.series();
    const auto& terms = series.terms();
    if (terms.empty()) {
        return 0.0;
    }
    const auto& top = terms.back();
    constexpr double tol = PowerLogSeries::kExponentTol;
    if (top.exponent > tol) {
        return top.coef > 0.0 ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity();
    }
    return std::abs(top.exponent) <= tol ? top.coef : 0.0;
}

} // namespace hvl
