#pragma once

#include "hvl/series.hpp"
#include "hvl/state.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hvl {

/// One identity evaluated on one state.
///
/// residual = |lhs - rhs| / max(scale, |lhs|, |rhs|), where scale is the
/// largest finite individual term entering either side. pass <=> residual <= tolerance.
struct IdentityReport {
    std::string tag;
    double lhs = 0.0;
    double rhs = 0.0;
    double scale = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string inputs;
    /// Named diagnostics (individual terms, closed-form values, ...), in insertion order.
    std::vector<std::pair<std::string, double>> details;

    double detail(const std::string& key) const;
};

IdentityReport make_report(std::string tag, double lhs, double rhs, const std::vector<double>& terms,
                           double tolerance, std::string inputs);

/// Probe f(r) for the general identity, as an exact sum of r^e ln^k r terms.
struct ProbeFunction {
    PowerLogSeries f;

    static ProbeFunction power(double q) { return {PowerLogSeries::monomial(1.0, q)}; }

    double value(double r) const { return f(r); }
    double d1(double r) const { return f.derivative()(r); }
    double d2(double r) const { return f.derivative().derivative()(r); }
    double d3(double r) const { return f.derivative().derivative().derivative()(r); }
    /// Smallest exponent of f (its small-r behaviour).
    double endpoint_exponent() const { return f.min_exponent(); }
};

/// lim_{r->0} { f [R^2 - r^2 R R'' + r^2 R'^2] - f' r R [r R' + R] + f'' r^2 R^2 / 2 }
/// from the state's local expansion, with R'' taken from the radial equation.
/// Throws Precondition when the limit does not exist.
double boundary_term(const Eigenstate& state, const ProbeFunction& probe);

/// Full identity: boundary term = -2<f'L> - <f L'> - <f'''>/2, L = A - l(l+1)/r^2.
IdentityReport hypervirial_general(const Eigenstate& state, const ProbeFunction& probe, double tolerance = 1e-6);

/// f = r^q. Regular: q >= -2l; singular: q >= 1 - 2P (Precondition otherwise).
/// The left side is the closed-form Kronecker-delta sum over the leading origin
/// powers (the limit itself for SingularLog); detail "lhs_limit" holds the
/// limit evaluated from the local expansion.
IdentityReport hypervirial_power(const Eigenstate& state, double q, double tolerance = 1e-6);

/// Schroedinger: E = <V + r V'/2> + extra, with
///   Singular     extra = (P^2 / m) a_st a_add
///   SingularLog  extra = -a_add^2 / (4m)
/// and zero otherwise. include_extra = false drops the extra term.
IdentityReport virial(const Eigenstate& state, double tolerance = 1e-6, bool include_extra = true);

/// Origin term of the virial relation from the state's coefficients:
///   Schroedinger  (P^2/m) a_st a_add (Singular), -a_add^2/(4m) (SingularLog)
///   KG two-body   4 P^2 a_st a_add (Singular), -a_add^2 (SingularLog)
/// Zero for single-branch states. Precondition for the one-body KG equation.
double virial_boundary_term(const Eigenstate& state);

/// Two-body KG: <V^2/2 - MV + (rV'/2)(V - M) + M^2/2 - 2m^2> = 4 P^2 a_st a_add.
IdentityReport kg_virial(const Eigenstate& state, double tolerance = 1e-3);

/// Two-body KG Coulomb at M = 0: -m^2 = 2 P^2 a_st a_add.
IdentityReport kg_massless(const Eigenstate& state, double tolerance = 1e-3);

/// Pure inverse-square Schroedinger level: E = (P^2/m) a_st a_add.
IdentityReport inverse_square_level(const Eigenstate& state, double tolerance = 1e-3);

/// Origin relations of a Regular state:
///   l = 0: origin_value          a_0^2 = -<A'>
///          origin_density        |psi(0)|^2 = (m / 2 pi) <dV/dr>      (Schroedinger)
///   l > 0: origin_derivative     (2l+1)^2 |R^(l)(0)|^2 = (l!)^2 <4l A / r^{2l+1} - A' / r^{2l}>
///          origin_derivative_schroedinger
///                                (2l+1)^2 |R^(l)(0)|^2 = 2m (l!)^2 [<V'/r^{2l}> + 4l <(E-V)/r^{2l+1}>]
///          centrifugal_moment    2l(l+1) <1/r^3> = -<A'>
/// Domain error for singular states.
std::vector<IdentityReport> origin_relations(const Eigenstate& state, double tolerance = 1e-4);

/// c1 <r^{q-1}> + c2 <r^{q+n-1}> + c3 <r^{q-3}> = 0 for V = V0 r^n (Schroedinger):
///   c1 = 2 E q, c2 = -V0 (2q + n), c3 = (q - 1)/m [q(q-2)/4 - l(l+1)].
struct Recurrence {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double e1 = 0.0; ///< q - 1
    double e2 = 0.0; ///< q + n - 1
    double e3 = 0.0; ///< q - 3
};

Recurrence recurrence_coefficients(double m, double V0, double n, double q, int l, double E);

/// The recurrence evaluated on a state whose potential is a single power law.
/// Tag: kramers (n = -1), oscillator_recurrence (n = 2), power_recurrence otherwise.
/// lhs = c1 <r^{q-1}>, rhs = -(c2 <r^{q+n-1}> + c3 <r^{q-3}>).
IdentityReport recurrence_check(const Eigenstate& state, double q, double tolerance = 1e-5);

} // namespace hvl
