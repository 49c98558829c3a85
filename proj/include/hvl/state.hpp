#pragma once

#include "hvl/grid.hpp"
#include "hvl/local.hpp"
#include "hvl/model.hpp"
#include "hvl/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hvl {

/// Near-origin coefficients of a state in its local basis.
///
/// For Regular states a_st holds a_s (R ~ a_s r^l) and a_add the coefficient of
/// the excluded r^{-l-1} branch, which should be zero up to noise.
struct OriginFit {
    BoundaryCondition::Kind bc_kind = BoundaryCondition::Kind::Regular;
    double a_st = 0.0;
    double a_add = 0.0;
    double r_lo = 0.0;
    double r_hi = 0.0;
    /// Relative RMS of the fit on its window.
    double residual = 0.0;
    /// Non-empty when the fit fell back to another basis.
    std::string warning;
    /// u = rR near the origin built from the fitted coefficients, restricted
    /// to the branches the boundary condition admits.
    PowerLogSeries local_u;

    double a_s() const noexcept { return a_st; }
};

/// A normalized bound state sampled on a Grid, from the solver or a closed form.
struct Eigenstate {
    RadialProblem problem;
    SingularityClass cls;
    BoundaryCondition bc;
    double eigenvalue = 0.0;
    Grid grid;
    std::vector<double> R;
    /// u = r R on the same grid.
    std::vector<double> u;
    int l = 0;
    int nodes = 0;
    /// Norm recomputed with a half-density quadrature; ~1 for a healthy state.
    double norm_check = 0.0;
    /// "numerov" for solver output, the closed-form name for oracles.
    std::string provenance;
    /// Local Frobenius basis at the eigenvalue.
    LocalBasis basis;
    OriginFit origin;
    /// Coefficients known without fitting (seed bookkeeping or closed form).
    std::optional<double> exact_a_st;
    std::optional<double> exact_a_add;
};

/// Counts sign changes, skipping values below 1e-14 of the peak magnitude.
int count_sign_changes(const std::vector<double>& values);

/// Assembles a state from sampled u values: normalizes (unit r^2 measure,
/// including the [0, r_min] tail), fixes the sign so R(r_min) > 0, counts
/// nodes, fits the origin behaviour and fills norm_check.
///
/// With normalize = false the values are kept as given (closed forms that are
/// normalized analytically). u_scale_to_unit receives the overall factor
/// applied to the input u.
Eigenstate assemble_state(const RadialProblem& problem, const SingularityClass& cls, const BoundaryCondition& bc,
                          double eigenvalue, const Grid& grid, std::vector<double> u, std::string provenance,
                          double* u_scale_to_unit = nullptr, bool normalize = true);

} // namespace hvl
