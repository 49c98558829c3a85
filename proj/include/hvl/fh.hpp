#pragma once

#include "hvl/identities.hpp"
#include "hvl/solver.hpp"
#include "hvl/state.hpp"

#include <cstddef>
#include <string>

namespace hvl {

/// Parameter lambda of a problem that the eigenvalue is differentiated by.
///
///   Mass       equation mass m, potential held fixed
///   Coupling   alpha (Coulomb) or V0 (PowerLaw, InverseSquare) of leaf `term`
///   Frequency  omega of an n = 2 PowerLaw leaf, V0 = m omega^2 / 2 at fixed m
///   Angular    l (never differentiated; only drives the refusal rules)
struct ParameterHandle {
    enum class Kind { Mass, Coupling, Frequency, Angular };
    Kind kind = Kind::Coupling;
    /// Leaf index into PotentialSpec::leaves() for Coupling and Frequency.
    std::size_t term = 0;

    static ParameterHandle mass() { return {Kind::Mass, 0}; }
    static ParameterHandle coupling(std::size_t term = 0) { return {Kind::Coupling, term}; }
    static ParameterHandle frequency(std::size_t term = 0) { return {Kind::Frequency, term}; }
    static ParameterHandle angular() { return {Kind::Angular, 0}; }

    std::string name(const RadialProblem& problem) const;
};

double parameter_value(const RadialProblem& problem, const ParameterHandle& handle);

/// Copy of the problem with the parameter set to value. Sum potentials come
/// back flattened.
RadialProblem with_parameter(const RadialProblem& problem, const ParameterHandle& handle, double value);

/// dV/dlambda as a series (empty for Mass).
PowerLogSeries potential_derivative(const RadialProblem& problem, const ParameterHandle& handle);

/// True when the singularity index P moves with the parameter.
bool affects_P(const RadialProblem& problem, const ParameterHandle& handle);

/// Refusal when the derivative theorem has a divergent origin term: l on a
/// singular problem, or a parameter that moves P on a two-branch state.
/// Precondition for l on a Regular problem.
void check_fh_refusal(const RadialProblem& problem, const BoundaryCondition& bc, const ParameterHandle& handle);

struct FhOptions {
    /// h = rel_step * |lambda| (rel_step itself when lambda = 0).
    double rel_step = 1e-4;
    /// Required relative agreement of the central differences at h and h/2.
    double richardson_tol = 1e-6;
    double tolerance = 1e-5;
    SolverOptions solver;

    void validate() const;
};

struct NumericDerivative {
    double lambda = 0.0;
    double h = 0.0;
    double d_h = 0.0;
    double d_h2 = 0.0;
    /// (4 d_{h/2} - d_h) / 3.
    double value = 0.0;
    Eigenstate center;
    /// States at lambda -+ h/2 on the center grid.
    Eigenstate minus;
    Eigenstate plus;
};

/// Central differences of E(lambda) at h and h/2 on the center state's grid,
/// with tau held fixed. Throws StepTooLarge when a shifted solve changes the
/// node count or the two differences disagree.
NumericDerivative dE_dlambda_numeric(const Eigenstate& center, const ParameterHandle& handle,
                                     const FhOptions& options = {});
NumericDerivative dE_dlambda_numeric(const RadialProblem& problem, const BoundaryCondition& bc, int nodes,
                                     const ParameterHandle& handle, const FhOptions& options = {});

/// Origin term of the derivative theorem from states at lambda -+ h.
///
///   bracket = a_st da_add/dlambda - a_add da_st/dlambda
///   B       = -2P bracket (Singular), bracket (SingularLog), 0 otherwise
///   direct  = u du'/dlambda - du/dlambda u', averaged over the center's fit window
///
/// Coefficients are the exact ones when the states carry them, the fitted ones
/// otherwise. Throws Refusal when the parameter moves P on a two-branch state.
struct BoundaryCorrection {
    double bracket = 0.0;
    double B = 0.0;
    double bracket_fit = 0.0;
    double direct = 0.0;
};
BoundaryCorrection fh_boundary_correction(const Eigenstate& center, const Eigenstate& minus,
                                          const Eigenstate& plus, double h, const ParameterHandle& handle);

/// Schroedinger: numeric dE/dlambda against <dH/dlambda> (dV/dlambda, or
/// -(E - <V>)/m for the mass). Single-branch states only.
IdentityReport fh_regular(const Eigenstate& state, const ParameterHandle& handle, const FhOptions& options = {});

/// Schroedinger with a singular boundary condition:
///   Singular     dE/dlambda = <dH/dlambda> + (P/m) bracket
///   SingularLog  dE/dlambda = <dH/dlambda> + bracket / (2m)
/// Detail "rhs_wronskian" holds <dH/dlambda> + direct / (2m).
IdentityReport fh_singular_schroedinger(const RadialProblem& problem, const BoundaryCondition& bc, int nodes,
                                        const ParameterHandle& handle, const FhOptions& options = {});

/// One-body KG:
///   generic lambda  dE/dlambda = [<(E - V) dV/dlambda> - B/2] / (E - <V>)
///   lambda = m      dE/dm = m / (E - <V>) + P bracket
/// DegenerateDenominator when |E - <V>| < 1e-10.
IdentityReport fh_kg_onebody(const RadialProblem& problem, const BoundaryCondition& bc, int nodes,
                             const ParameterHandle& handle, const FhOptions& options = {});

} // namespace hvl
