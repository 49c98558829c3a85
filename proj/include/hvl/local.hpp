#pragma once

#include "hvl/model.hpp"
#include "hvl/series.hpp"

#include <string>

namespace hvl {

/// Behaviour of the radial function at the origin.
///
///   Regular(s)         R ~ r^s
///   Singular(P, tau)   R ~ r^{-1/2+P} + tau r^{-1/2-P},   tau = a_add / a_st
///   SingularLog(tau)   R ~ r^{-1/2} + tau r^{-1/2} ln r
///   StandardOnly(P)    R ~ r^{-1/2+P}, P >= 1/2
///
/// tau = +inf selects the pure additional branch.
struct BoundaryCondition {
    enum class Kind { Regular, Singular, SingularLog, StandardOnly };

    Kind kind = Kind::Regular;
    int s = 0;
    double P = 0.0;
    double tau = 0.0;

    static BoundaryCondition regular(int s) { return {Kind::Regular, s, 0.0, 0.0}; }
    static BoundaryCondition singular(double P, double tau) { return {Kind::Singular, 0, P, tau}; }
    static BoundaryCondition singular_log(double tau) { return {Kind::SingularLog, 0, 0.0, tau}; }
    static BoundaryCondition standard_only(double P) { return {Kind::StandardOnly, 0, P, 0.0}; }

    void validate() const;
    bool pure_additional() const;
    /// True when the origin behaviour mixes two branches with non-zero weight.
    bool has_additional() const;
};

std::string to_string(BoundaryCondition::Kind kind);

/// The boundary condition matching a classification, with tau for the
/// singular kinds.
BoundaryCondition default_boundary_condition(const SingularityClass& cls, int l, double tau = 0.0);

/// Throws Precondition when bc does not fit the problem's classification.
void check_compatible(const BoundaryCondition& bc, const SingularityClass& cls, int l);

/// Two small-r solutions of u'' + L u = 0 as Frobenius series (u = rR).
///
/// primary: Phi_reg (r^{l+1} + ...) or Phi_st (r^{1/2+P} + ...).
/// secondary: Phi_add (r^{1/2-P} + ...) or Phi_log (Phi_st ln r + ...) for the
/// singular kinds; for Regular and StandardOnly only the bare leading power of
/// the excluded branch, used as a leak probe in fits.
///
/// Both are normalized to unit leading coefficient, so the coefficients of a
/// state in this basis are a_s / a_st and a_add directly.
struct LocalBasis {
    BoundaryCondition::Kind kind = BoundaryCondition::Kind::Regular;
    PowerLogSeries primary;
    PowerLogSeries secondary;
    bool secondary_is_solution = false;
    double gamma_primary = 1.0;
    double gamma_secondary = 0.0;
};

struct FrobeniusControl {
    /// Highest exponent offset kept above the indicial root.
    double max_offset = 10.0;
    int max_terms = 400;
};

/// Local basis for L = A(eigenparameter) - l(l+1)/r^2.
LocalBasis local_basis(const RadialProblem& problem, double eigenparameter,
                       const SingularityClass& cls, const FrobeniusControl& control = {});

/// u-series of the boundary condition: primary + tau secondary (or secondary
/// alone for tau = inf).
PowerLogSeries seed_series(const LocalBasis& basis, const BoundaryCondition& bc);

} // namespace hvl
