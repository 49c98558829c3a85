#include "hvl/identities.hpp"

#include "hvl/errors.hpp"
#include "hvl/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace hvl {

namespace {

using BK = BoundaryCondition::Kind;

constexpr double kDeltaTol = 1e-9;

std::string describe(const Eigenstate& st, const std::string& extra = {})
{
    std::ostringstream os;
    os.precision(17);
    os << st.provenance << "; " << to_string(st.problem.equation.type) << " m=" << st.problem.equation.m << "; V="
       << st.problem.potential.describe() << "; l=" << st.l << "; " << st.problem.eigenparameter_name() << "="
       << st.eigenvalue << "; bc=" << to_string(st.bc.kind);
    if (st.bc.kind == BK::Singular || st.bc.kind == BK::SingularLog) {
        os << "(P=" << st.bc.P << ",tau=" << st.bc.tau << ")";
    }
    if (!extra.empty()) {
        os << "; " << extra;
    }
    return os.str();
}

std::pair<double, double> coefficients(const Eigenstate& st)
{
    if (st.exact_a_st && st.exact_a_add) {
        return {*st.exact_a_st, *st.exact_a_add};
    }
    return {st.origin.a_st, st.origin.a_add};
}

PowerLogSeries local_u(const Eigenstate& st)
{
    const auto [a_st, a_add] = coefficients(st);
    const auto& b = st.basis;
    if (st.bc.kind == BK::Regular || st.bc.kind == BK::StandardOnly || st.bc.tau == 0.0) {
        return a_st * b.primary;
    }
    if (std::isinf(st.bc.tau)) {
        return a_add * b.secondary;
    }
    return a_st * b.primary + a_add * b.secondary;
}

PowerLogSeries full_L(const Eigenstate& st)
{
    return build_effective_coefficient(st.problem, st.eigenvalue).with_centrifugal(st.l);
}

// Largest |<w>| over the pieces that converge on their own.
void add_finite(std::vector<double>& terms, const Eigenstate& st, const PowerLogSeries& w, double factor = 1.0)
{
    try {
        terms.push_back(std::abs(factor * expectation(st, w)));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Divergence) {
            throw;
        }
    }
}

// Grid-only integral of |w| u^2, a scale for sums whose pieces diverge separately.
double abs_moment(const Eigenstate& st, const PowerLogSeries& w)
{
    const Grid& g = st.grid;
    const auto wt = simpson_weights(g.size(), g.step());
    double total = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double u = st.u[i];
        total += wt[i] * std::abs(w(g.r(i))) * u * u * g.jacobian(i);
    }
    return total;
}

void require_schroedinger(const Eigenstate& st, const char* what)
{
    if (st.problem.equation.type != EquationKind::Type::Schroedinger) {
        throw Error(ErrorKind::Precondition, std::string(what) + " applies to the Schroedinger equation only");
    }
}

PowerLogSeries virial_weight(const PotentialSpec& pot)
{
    const PowerLogSeries V = pot.series();
    return V + 0.5 * V.derivative().shifted(1.0);
}

double virial_extra(const Eigenstate& st)
{
    const auto [a_st, a_add] = coefficients(st);
    const double m = st.problem.equation.m;
    if (st.bc.kind == BK::Singular) {
        return st.cls.P * st.cls.P / m * a_st * a_add;
    }
    if (st.bc.kind == BK::SingularLog) {
        return -a_add * a_add / (4.0 * m);
    }
    return 0.0;
}

double factorial(int l) { return std::tgamma(l + 1.0); }

} // namespace

double IdentityReport::detail(const std::string& key) const
{
    for (const auto& [k, v] : details) {
        if (k == key) {
            return v;
        }
    }
    throw Error(ErrorKind::Precondition, "report has no detail '" + key + "'");
}

IdentityReport make_report(std::string tag, double lhs, double rhs, const std::vector<double>& terms,
                           double tolerance, std::string inputs)
{
    IdentityReport rep;
    rep.tag = std::move(tag);
    rep.lhs = lhs;
    rep.rhs = rhs;
    for (double t : terms) {
        if (std::isfinite(t)) {
            rep.scale = std::max(rep.scale, std::abs(t));
        }
    }
    const double denom = std::max({rep.scale, std::abs(lhs), std::abs(rhs)});
    const double diff = std::abs(lhs - rhs);
    rep.residual = denom > 0.0 ? diff / denom : diff;
    if (!std::isfinite(rep.residual)) {
        rep.residual = std::numeric_limits<double>::infinity();
    }
    rep.tolerance = tolerance;
    rep.pass = rep.residual <= tolerance;
    rep.inputs = std::move(inputs);
    return rep;
}

double boundary_term(const Eigenstate& state, const ProbeFunction& probe)
{
    const PowerLogSeries R = local_u(state).shifted(-1.0);
    const PowerLogSeries R1 = R.derivative();
    const PowerLogSeries R2 = -2.0 * R1.shifted(-1.0) - full_L(state) * R;
    const PowerLogSeries& f = probe.f;
    const PowerLogSeries f1 = f.derivative();
    const PowerLogSeries f2 = f1.derivative();
    const PowerLogSeries rR1 = R1.shifted(1.0);
    const PowerLogSeries bracket = f * (R * R - (R * R2).shifted(2.0) + rR1 * rR1) -
                                   (f1 * R).shifted(1.0) * (rR1 + R) + 0.5 * (f2 * R * R).shifted(2.0);
    const auto limit = bracket.limit_at_zero();
    if (!limit) {
        std::ostringstream os;
        os << "inadmissible probe: boundary term diverges like r^" << bracket.min_exponent();
        throw Error(ErrorKind::Precondition, os.str());
    }
    return *limit;
}

IdentityReport hypervirial_general(const Eigenstate& state, const ProbeFunction& probe, double tolerance)
{
    const PowerLogSeries A = build_effective_coefficient(state.problem, state.eigenvalue).series();
    const double ll = state.l * (state.l + 1.0);
    const PowerLogSeries cent = PowerLogSeries::monomial(ll, -2.0);
    const PowerLogSeries L = A - cent;
    const PowerLogSeries& f = probe.f;
    const PowerLogSeries f1 = f.derivative();
    const PowerLogSeries f3 = f1.derivative().derivative();
    const PowerLogSeries w = -2.0 * (f1 * L) - f * L.derivative() - 0.5 * f3;

    const double lhs = boundary_term(state, probe);
    const double rhs = expectation(state, w);

    std::vector<double> terms{lhs, abs_moment(state, w)};
    add_finite(terms, state, f1 * A, 2.0);
    add_finite(terms, state, f1 * cent, 2.0);
    add_finite(terms, state, f * A.derivative());
    add_finite(terms, state, f * cent.derivative());
    add_finite(terms, state, f3, 0.5);
    std::ostringstream probe_desc;
    probe_desc << "probe terms=" << f.terms().size() << " min_exponent=" << probe.endpoint_exponent();
    return make_report("hypervirial", lhs, rhs, terms, tolerance, describe(state, probe_desc.str()));
}

IdentityReport hypervirial_power(const Eigenstate& state, double q, double tolerance)
{
    const bool regular = state.bc.kind == BK::Regular;
    const double threshold = regular ? -2.0 * state.l : 1.0 - 2.0 * state.cls.P;
    if (q < threshold - kDeltaTol) {
        std::ostringstream os;
        os << "q = " << q << " is below the admissible threshold " << threshold;
        throw Error(ErrorKind::Precondition, os.str());
    }
    const PowerLogSeries A = build_effective_coefficient(state.problem, state.eigenvalue).series();
    const double ll = state.l * (state.l + 1.0);
    const double k3 = 2.0 * ll * (1.0 - q) + 0.5 * q * (q - 1.0) * (q - 2.0);
    const PowerLogSeries t1 = 2.0 * q * A.shifted(q - 1.0);
    const PowerLogSeries t2 = A.derivative().shifted(q);
    const PowerLogSeries t3 = PowerLogSeries::monomial(k3, q - 3.0);
    const PowerLogSeries w = -(t1 + t2 + t3);

    // The limit also rejects q where the origin term diverges.
    const double limit = boundary_term(state, ProbeFunction::power(q));
    double lhs = limit;
    // Leading-power closed form: R = a r^alpha + b r^beta, Kronecker deltas in q.
    if (state.bc.kind != BK::SingularLog) {
        const auto [a_st, a_add] = coefficients(state);
        const double alpha = state.basis.gamma_primary - 1.0;
        const double beta = state.basis.gamma_secondary - 1.0;
        auto cross = [q](double x, double y) {
            return 2.0 - x * (x - 1.0) - y * (y - 1.0) + 2.0 * x * y - q * (x + y + 2.0) + q * (q - 1.0);
        };
        auto delta = [](double e) { return std::abs(e) < kDeltaTol ? 1.0 : 0.0; };
        lhs = 0.5 * cross(alpha, alpha) * a_st * a_st * delta(q + 2.0 * alpha);
        if (state.bc.has_additional() || state.bc.pure_additional()) {
            lhs += cross(alpha, beta) * a_st * a_add * delta(q + alpha + beta) +
                   0.5 * cross(beta, beta) * a_add * a_add * delta(q + 2.0 * beta);
        }
    }
    const double rhs = expectation(state, w);
    std::vector<double> terms{lhs, abs_moment(state, w)};
    add_finite(terms, state, t1);
    add_finite(terms, state, t2);
    add_finite(terms, state, t3);

    std::ostringstream os;
    os << "q=" << q;
    IdentityReport rep = make_report("hypervirial_power", lhs, rhs, terms, tolerance, describe(state, os.str()));
    rep.details.emplace_back("lhs_limit", limit);
    return rep;
}

IdentityReport virial(const Eigenstate& state, double tolerance, bool include_extra)
{
    require_schroedinger(state, "virial");
    const PowerLogSeries V = state.problem.potential.series();
    const PowerLogSeries half_rV1 = 0.5 * V.derivative().shifted(1.0);
    const double avg = expectation(state, V + half_rV1);
    const double extra = include_extra ? virial_extra(state) : 0.0;
    std::vector<double> terms{state.eigenvalue, avg, extra};
    add_finite(terms, state, V);
    add_finite(terms, state, half_rV1);
    IdentityReport rep = make_report("virial", state.eigenvalue, avg + extra, terms, tolerance,
                                     describe(state, include_extra ? "" : "extra term disabled"));
    rep.details.emplace_back("average", avg);
    rep.details.emplace_back("extra", extra);
    return rep;
}

double virial_boundary_term(const Eigenstate& state)
{
    switch (state.problem.equation.type) {
    case EquationKind::Type::Schroedinger:
        return virial_extra(state);
    case EquationKind::Type::KleinGordonTwoBody:
        return 4.0 * state.problem.equation.m * virial_extra(state);
    case EquationKind::Type::KleinGordonOneBody:
        break;
    }
    throw Error(ErrorKind::Precondition, "no virial origin term for the one-body Klein-Gordon equation");
}

IdentityReport kg_virial(const Eigenstate& state, double tolerance)
{
    if (state.problem.equation.type != EquationKind::Type::KleinGordonTwoBody) {
        throw Error(ErrorKind::Precondition, "kg_virial applies to the two-body Klein-Gordon equation only");
    }
    const double M = state.eigenvalue;
    const double m = state.problem.equation.m;
    const PowerLogSeries V = state.problem.potential.series();
    const PowerLogSeries half_rV1 = 0.5 * V.derivative().shifted(1.0);
    const PowerLogSeries constant = PowerLogSeries::constant(0.5 * M * M - 2.0 * m * m);
    const PowerLogSeries w = 0.5 * (V * V) - M * V + half_rV1 * (V - PowerLogSeries::constant(M)) + constant;
    const double lhs = expectation(state, w);
    const double rhs = virial_boundary_term(state);
    std::vector<double> terms{lhs, rhs, abs_moment(state, w), std::abs(0.5 * M * M - 2.0 * m * m)};
    add_finite(terms, state, 0.5 * (V * V));
    add_finite(terms, state, V, M);
    add_finite(terms, state, half_rV1 * V);
    add_finite(terms, state, half_rV1, M);
    return make_report("kg_virial", lhs, rhs, terms, tolerance, describe(state, "unit r^2-measure norm"));
}

IdentityReport kg_massless(const Eigenstate& state, double tolerance)
{
    if (state.problem.equation.type != EquationKind::Type::KleinGordonTwoBody) {
        throw Error(ErrorKind::Precondition, "kg_massless applies to the two-body Klein-Gordon equation only");
    }
    const double m = state.problem.equation.m;
    if (std::abs(state.eigenvalue) > 1e-6 * m) {
        throw Error(ErrorKind::Precondition, "kg_massless needs a state with M = 0");
    }
    const PowerLogSeries V = state.problem.potential.series();
    if (!(V * (V + V.derivative().shifted(1.0))).empty()) {
        throw Error(ErrorKind::Precondition, "kg_massless needs a pure Coulomb potential");
    }
    if (state.bc.kind != BK::Singular) {
        throw Error(ErrorKind::Precondition, "kg_massless needs a Singular state");
    }
    const auto [a_st, a_add] = coefficients(state);
    const double P = state.cls.P;
    const double rhs = 2.0 * P * P * a_st * a_add;
    return make_report("kg_massless", -m * m, rhs, {m * m, rhs}, tolerance, describe(state, "unit r^2-measure norm"));
}

IdentityReport inverse_square_level(const Eigenstate& state, double tolerance)
{
    require_schroedinger(state, "inverse_square_level");
    if (!virial_weight(state.problem.potential).empty()) {
        throw Error(ErrorKind::Precondition, "inverse_square_level needs a pure inverse-square potential");
    }
    const double rhs = virial_extra(state);
    return make_report("inverse_square_level", state.eigenvalue, rhs, {state.eigenvalue, rhs}, tolerance,
                       describe(state));
}

std::vector<IdentityReport> origin_relations(const Eigenstate& state, double tolerance)
{
    if (state.bc.kind != BK::Regular) {
        throw Error(ErrorKind::Domain, "origin relations need a Regular state");
    }
    const int l = state.l;
    const double m = state.problem.equation.m;
    const bool schroedinger = state.problem.equation.type == EquationKind::Type::Schroedinger;
    const PowerLogSeries A = build_effective_coefficient(state.problem, state.eigenvalue).series();
    const PowerLogSeries A1 = A.derivative();
    const PowerLogSeries V = state.problem.potential.series();
    const PowerLogSeries V1 = V.derivative();
    const double a = coefficients(state).first;
    const double minus_A1 = -expectation(state, A1);
    std::vector<IdentityReport> out;

    if (l == 0) {
        out.push_back(make_report("origin_value", a * a, minus_A1, {a * a, minus_A1}, tolerance, describe(state)));
        if (schroedinger) {
            const double lhs = a * a / (4.0 * std::numbers::pi);
            const double rhs = m / (2.0 * std::numbers::pi) * expectation(state, V1);
            out.push_back(make_report("origin_density", lhs, rhs, {lhs, rhs}, tolerance, describe(state)));
        }
        return out;
    }

    const double fact = factorial(l);
    const double d = fact * a;
    const double lhs = (2.0 * l + 1.0) * (2.0 * l + 1.0) * d * d;
    const PowerLogSeries p1 = 4.0 * l * A.shifted(-2.0 * l - 1.0);
    const PowerLogSeries p2 = A1.shifted(-2.0 * l);
    const double rhs = fact * fact * expectation(state, p1 - p2);
    std::vector<double> terms{lhs, rhs};
    add_finite(terms, state, p1, fact * fact);
    add_finite(terms, state, p2, fact * fact);
    out.push_back(make_report("origin_derivative", lhs, rhs, terms, tolerance, describe(state)));

    if (schroedinger) {
        const double E = state.eigenvalue;
        const double s1 = expectation(state, V1.shifted(-2.0 * l));
        const double s2 = expectation(state, (PowerLogSeries::constant(E) - V).shifted(-2.0 * l - 1.0));
        const double k = 2.0 * m * fact * fact;
        const double rhs_s = k * (s1 + 4.0 * l * s2);
        out.push_back(make_report("origin_derivative_schroedinger", lhs, rhs_s,
                                  {lhs, rhs_s, k * s1, 4.0 * l * k * s2}, tolerance, describe(state)));
    }

    const double c = 2.0 * l * (l + 1.0) * expectation(state, PowerLogSeries::monomial(1.0, -3.0));
    out.push_back(make_report("centrifugal_moment", c, minus_A1, {c, minus_A1}, tolerance, describe(state)));
    return out;
}

Recurrence recurrence_coefficients(double m, double V0, double n, double q, int l, double E)
{
    Recurrence rc;
    rc.c1 = 2.0 * E * q;
    rc.c2 = -V0 * (2.0 * q + n);
    rc.c3 = (q - 1.0) / m * (0.25 * q * (q - 2.0) - l * (l + 1.0));
    rc.e1 = q - 1.0;
    rc.e2 = q + n - 1.0;
    rc.e3 = q - 3.0;
    return rc;
}

IdentityReport recurrence_check(const Eigenstate& state, double q, double tolerance)
{
    require_schroedinger(state, "recurrence");
    if (state.bc.kind != BK::Regular) {
        throw Error(ErrorKind::Precondition, "recurrence needs a Regular state");
    }
    if (q <= -2.0 * state.l + kDeltaTol) {
        throw Error(ErrorKind::Precondition, "recurrence needs q > -2l");
    }
    const PowerLogSeries V = state.problem.potential.series();
    const auto& terms = V.terms();
    if (terms.size() != 1 || terms.front().log_power != 0) {
        throw Error(ErrorKind::Precondition, "recurrence needs a single power-law potential");
    }
    const double V0 = terms.front().coef;
    const double n = terms.front().exponent;
    const Recurrence rc =
        recurrence_coefficients(state.problem.equation.m, V0, n, q, state.l, state.eigenvalue);
    auto moment = [&](double c, double e) {
        return c == 0.0 ? 0.0 : c * expectation(state, PowerLogSeries::monomial(1.0, e));
    };
    const double t1 = moment(rc.c1, rc.e1);
    const double t2 = moment(rc.c2, rc.e2);
    const double t3 = moment(rc.c3, rc.e3);
    const char* tag = std::abs(n + 1.0) < kDeltaTol  ? "kramers"
                      : std::abs(n - 2.0) < kDeltaTol ? "oscillator_recurrence"
                                                      : "power_recurrence";
    std::ostringstream os;
    os << "q=" << q;
    IdentityReport rep = make_report(tag, t1, -(t2 + t3), {t1, t2, t3}, tolerance, describe(state, os.str()));
    rep.details.emplace_back("c1", rc.c1);
    rep.details.emplace_back("c2", rc.c2);
    rep.details.emplace_back("c3", rc.c3);
    return rep;
}

} // namespace hvl
