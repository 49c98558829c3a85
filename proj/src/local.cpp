#include "hvl/local.hpp"

#include "hvl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace hvl {

namespace {

constexpr double kOffsetTol = 1e-9;

struct Perturbation {
    double lambda;
    double shift; // exponent + 2
};

// Nonnegative combinations of the shifts up to max_offset, sorted.
std::vector<double> offset_set(const std::vector<Perturbation>& perts, const FrobeniusControl& control)
{
    std::vector<double> out{0.0};
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (const auto& p : perts) {
            const double next = out[i] + p.shift;
            if (next > control.max_offset + kOffsetTol) {
                continue;
            }
            const bool seen = std::any_of(out.begin(), out.end(),
                                          [&](double o) { return std::abs(o - next) <= kOffsetTol; });
            if (!seen) {
                if (static_cast<int>(out.size()) >= control.max_terms) {
                    break;
                }
                out.push_back(next);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

long find_offset(const std::vector<double>& offsets, double k)
{
    auto it = std::lower_bound(offsets.begin(), offsets.end(), k - kOffsetTol);
    if (it != offsets.end() && std::abs(*it - k) <= kOffsetTol) {
        return it - offsets.begin();
    }
    return -1;
}

// Coefficients c_k of u = sum c_k r^{gamma+k}, c_0 = 1, from
// k (2 gamma + k - 1) c_k = -sum_j lambda_j c_{k - s_j}.
std::vector<double> frobenius(double gamma, const std::vector<double>& offsets,
                              const std::vector<Perturbation>& perts)
{
    std::vector<double> c(offsets.size(), 0.0);
    c[0] = 1.0;
    for (std::size_t i = 1; i < offsets.size(); ++i) {
        const double k = offsets[i];
        double rhs = 0.0;
        double mag = 0.0;
        for (const auto& p : perts) {
            const long j = find_offset(offsets, k - p.shift);
            if (j >= 0) {
                rhs -= p.lambda * c[static_cast<std::size_t>(j)];
                mag += std::abs(p.lambda * c[static_cast<std::size_t>(j)]);
            }
        }
        const double denom = k * (2.0 * gamma + k - 1.0);
        if (std::abs(denom) <= 1e-9 * std::max(1.0, k * k)) {
            if (std::abs(rhs) <= 1e-12 * std::max(mag, 1e-300)) {
                c[i] = 0.0;
                continue;
            }
            throw Error(ErrorKind::Classification,
                        "resonant Frobenius exponents: the local solution needs logarithmic terms");
        }
        c[i] = rhs / denom;
    }
    return c;
}

PowerLogSeries to_series(double gamma, const std::vector<double>& offsets, const std::vector<double>& c,
                         int log_power)
{
    std::vector<SeriesTerm> terms;
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        if (c[i] != 0.0) {
            terms.push_back({c[i], gamma + offsets[i], log_power});
        }
    }
    return PowerLogSeries(std::move(terms));
}

} // namespace

void BoundaryCondition::validate() const
{
    switch (kind) {
    case Kind::Regular:
        if (s < 0) {
            throw Error(ErrorKind::Precondition, "regular boundary condition needs s >= 0");
        }
        return;
    case Kind::Singular:
        if (!(P > 0.0 && P < 0.5)) {
            throw Error(ErrorKind::Precondition, "singular boundary condition needs 0 < P < 1/2");
        }
        if (std::isnan(tau)) {
            throw Error(ErrorKind::Precondition, "tau must not be NaN");
        }
        return;
    case Kind::SingularLog:
        if (std::isnan(tau)) {
            throw Error(ErrorKind::Precondition, "tau must not be NaN");
        }
        return;
    case Kind::StandardOnly:
        if (!(P >= 0.5)) {
            throw Error(ErrorKind::Precondition, "standard-only boundary condition needs P >= 1/2");
        }
        return;
    }
}

bool BoundaryCondition::pure_additional() const
{
    return (kind == Kind::Singular || kind == Kind::SingularLog) && std::isinf(tau);
}

bool BoundaryCondition::has_additional() const
{
    return (kind == Kind::Singular || kind == Kind::SingularLog) && tau != 0.0;
}

std::string to_string(BoundaryCondition::Kind kind)
{
    switch (kind) {
    case BoundaryCondition::Kind::Regular:
        return "regular";
    case BoundaryCondition::Kind::Singular:
        return "singular";
    case BoundaryCondition::Kind::SingularLog:
        return "singular_log";
    case BoundaryCondition::Kind::StandardOnly:
        return "standard_only";
    }
    return "unknown";
}

BoundaryCondition default_boundary_condition(const SingularityClass& cls, int l, double tau)
{
    using K = SingularityClass::Kind;
    switch (cls.kind) {
    case K::Regular:
        return BoundaryCondition::regular(l);
    case K::Singular:
        return BoundaryCondition::singular(cls.P, tau);
    case K::SingularLog:
        return BoundaryCondition::singular_log(tau);
    case K::StandardOnly:
        return BoundaryCondition::standard_only(cls.P);
    case K::Supercritical:
        break;
    }
    throw Error(ErrorKind::Supercritical, "supercritical coupling: no boundary condition exists");
}

void check_compatible(const BoundaryCondition& bc, const SingularityClass& cls, int l)
{
    bc.validate();
    using K = SingularityClass::Kind;
    using B = BoundaryCondition::Kind;
    if (cls.kind == K::Supercritical) {
        throw Error(ErrorKind::Supercritical, "supercritical coupling: (l+1/2)^2 - c < 0");
    }
    const bool ok = (cls.kind == K::Regular && bc.kind == B::Regular) ||
                    (cls.kind == K::Singular && bc.kind == B::Singular) ||
                    (cls.kind == K::SingularLog && bc.kind == B::SingularLog) ||
                    (cls.kind == K::StandardOnly && bc.kind == B::StandardOnly);
    if (!ok) {
        throw Error(ErrorKind::Precondition, "boundary condition " + to_string(bc.kind) +
                                                 " does not match classification " + to_string(cls.kind));
    }
    if (bc.kind == B::Regular && bc.s != l) {
        throw Error(ErrorKind::Precondition, "regular boundary condition requires s = l");
    }
    if ((bc.kind == B::Singular || bc.kind == B::StandardOnly) && std::abs(bc.P - cls.P) > 1e-9) {
        throw Error(ErrorKind::Precondition, "boundary-condition P disagrees with the problem's P");
    }
}

LocalBasis local_basis(const RadialProblem& problem, double eigenparameter, const SingularityClass& cls,
                       const FrobeniusControl& control)
{
    const PowerLogSeries L = build_effective_coefficient(problem, eigenparameter).with_centrifugal(problem.l);
    std::vector<Perturbation> perts;
    for (const auto& t : L.terms()) {
        if (t.log_power != 0) {
            throw Error(ErrorKind::Classification, "logarithmic terms in L are not supported");
        }
        if (t.exponent > -2.0 + PowerLogSeries::kExponentTol) {
            perts.push_back({t.coef, t.exponent + 2.0});
        }
    }
    const auto offsets = offset_set(perts, control);

    LocalBasis basis;
    using K = SingularityClass::Kind;
    using B = BoundaryCondition::Kind;
    switch (cls.kind) {
    case K::Regular: {
        basis.kind = B::Regular;
        basis.gamma_primary = problem.l + 1.0;
        basis.gamma_secondary = -static_cast<double>(problem.l);
        basis.primary = to_series(basis.gamma_primary, offsets, frobenius(basis.gamma_primary, offsets, perts), 0);
        basis.secondary = PowerLogSeries::monomial(1.0, basis.gamma_secondary);
        return basis;
    }
    case K::Singular: {
        basis.kind = B::Singular;
        basis.gamma_primary = 0.5 + cls.P;
        basis.gamma_secondary = 0.5 - cls.P;
        basis.primary = to_series(basis.gamma_primary, offsets, frobenius(basis.gamma_primary, offsets, perts), 0);
        basis.secondary =
            to_series(basis.gamma_secondary, offsets, frobenius(basis.gamma_secondary, offsets, perts), 0);
        basis.secondary_is_solution = true;
        return basis;
    }
    case K::SingularLog: {
        basis.kind = B::SingularLog;
        basis.gamma_primary = 0.5;
        basis.gamma_secondary = 0.5;
        const auto c = frobenius(0.5, offsets, perts);
        // k^2 d_k = -2k c_k - sum_j lambda_j d_{k - s_j}, d_0 = 0
        std::vector<double> d(offsets.size(), 0.0);
        for (std::size_t i = 1; i < offsets.size(); ++i) {
            const double k = offsets[i];
            double rhs = -2.0 * k * c[i];
            for (const auto& p : perts) {
                const long j = find_offset(offsets, k - p.shift);
                if (j >= 0) {
                    rhs -= p.lambda * d[static_cast<std::size_t>(j)];
                }
            }
            d[i] = rhs / (k * k);
        }
        basis.primary = to_series(0.5, offsets, c, 0);
        basis.secondary = to_series(0.5, offsets, c, 1) + to_series(0.5, offsets, d, 0);
        basis.secondary_is_solution = true;
        return basis;
    }
    case K::StandardOnly: {
        basis.kind = B::StandardOnly;
        basis.gamma_primary = 0.5 + cls.P;
        basis.gamma_secondary = 0.5 - cls.P;
        basis.primary = to_series(basis.gamma_primary, offsets, frobenius(basis.gamma_primary, offsets, perts), 0);
        basis.secondary = PowerLogSeries::monomial(1.0, basis.gamma_secondary);
        return basis;
    }
    case K::Supercritical:
        break;
    }
    throw Error(ErrorKind::Supercritical, "supercritical coupling: no local basis");
}

PowerLogSeries seed_series(const LocalBasis& basis, const BoundaryCondition& bc)
{
    if (bc.kind == BoundaryCondition::Kind::Regular || bc.kind == BoundaryCondition::Kind::StandardOnly) {
        return basis.primary;
    }
    if (std::isinf(bc.tau)) {
        return basis.secondary;
    }
    return basis.primary + bc.tau * basis.secondary;
}

} // namespace hvl
