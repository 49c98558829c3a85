#pragma once

#include "hvl/grid.hpp"
#include "hvl/local.hpp"
#include "hvl/model.hpp"
#include "hvl/series.hpp"
#include "hvl/state.hpp"

#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace hvl {

enum class Direction { Outward, Inward };

/// Numerov output. True values are u[i] * exp(log_scale[i]); the log factors
/// come from rescaling whenever |u| grows past 1e150.
struct NumerovSolution {
    std::vector<double> u;
    std::vector<double> log_scale;

    /// u[i] * exp(log_scale[i] - reference) for every point.
    std::vector<double> values(double reference = 0.0) const;
};

/// Integrates u'' + L(r) u = 0 on the grid with the Numerov three-point rule.
///
/// The grid is uniform in x, so the equation is first brought to the
/// first-derivative-free form y'' + Q y = 0 with u = sqrt(J) y,
///     Q = J^2 L - (1/4 + r/r_s) / (1 + r/r_s)^4.
/// Numerov then runs with constant step over the whole range. Seeds are u
/// values at the first two (outward) or last two (inward) grid points.
NumerovSolution numerov_integrate(const PowerLogSeries& L, const Grid& grid, Direction direction,
                                  std::pair<double, double> seed);

/// u at the first two grid points from the bare leading powers of the boundary
/// condition (no Frobenius corrections).
std::pair<double, double> origin_seed(const BoundaryCondition& bc, const Grid& grid);

/// Same, from the full local series of the problem at the given eigenparameter.
std::pair<double, double> origin_seed(const BoundaryCondition& bc, const Grid& grid, const LocalBasis& basis);

struct SolverOptions {
    GridSpec grid;
    /// Bracket for the eigenparameter; chosen automatically when absent.
    std::optional<std::pair<double, double>> bracket;
    /// Solve on exactly this grid (no automatic r_max, no rebuild).
    std::optional<Grid> fixed_grid;
    /// Absolute eigenvalue tolerance of the final bisection, scaled by max(1, |E|).
    double eig_tol = 1e-12;
    int max_iterations = 400;

    void validate() const;
};

/// Largest eigenparameter value for which bound (decaying) states can exist;
/// +inf for confining potentials.
double decay_threshold(const RadialProblem& problem);

/// r_max for the grid at a given eigenparameter: past the outermost turning
/// point of L until int sqrt(-L) dr reaches spec.tail_decay.
double automatic_r_max(const RadialProblem& problem, double eigenparameter, const GridSpec& spec);

Grid grid_for(const RadialProblem& problem, double eigenparameter, const GridSpec& spec);

/// Two-sided shooting with node-count bracketing.
Eigenstate solve_bound_state(const RadialProblem& problem, const BoundaryCondition& bc, int nodes,
                             const SolverOptions& options = {});

/// Number of nodes of the outward solution over the whole grid at the given
/// eigenparameter. Exposed for tests and scans.
int outward_node_count(const RadialProblem& problem, const BoundaryCondition& bc, double eigenparameter,
                       const Grid& grid);

/// Numerov-consistent matching mismatch at the classical matching point.
double matching_mismatch(const RadialProblem& problem, const BoundaryCondition& bc, double eigenparameter,
                         const Grid& grid);

/// Two-body KG: solves for the total mass M at fixed tau near M = 0, scanning
/// the matching mismatch over [-window, window] (window = 0.25 m by default).
/// Throws NoEigenvalue when no root is present.
struct MasslessResult {
    double M = 0.0;
    Eigenstate state;
};
MasslessResult solve_kg_masslessness(const RadialProblem& problem, double tau, const SolverOptions& options = {},
                                     double window = 0.0);

/// SAE parameter that makes the massless two-body state (or any inverse-square
/// like level with decay constant kappa) the K_P form:
/// tau* = -(kappa/2)^{-2P} Gamma(1+P) / Gamma(1-P).
double kp_matching_tau(double P, double kappa);

} // namespace hvl
