#pragma once

#include "hvl/series.hpp"
#include "hvl/state.hpp"

#include <functional>
#include <optional>

namespace hvl {

struct FitOptions {
    /// Window [lo_factor r_min, hi_factor r_min], shrunk from above until the
    /// small-r asymptotics hold.
    double lo_factor = 2.0;
    double hi_factor = 100.0;
    /// Required |r^2 A - c| < validity * max(|c|, 1/4) on the window.
    double validity = 0.05;
    /// Below this P the two singular exponents are fitted through the log basis.
    double min_P = 0.02;
};

/// Weighted least-squares fit of R on the window against the state's local
/// two-function basis (Frobenius-corrected; see LocalBasis).
OriginFit fit_origin(const Eigenstate& state, const FitOptions& options = {});

/// <f> = int_0^inf f R^2 r^2 dr for f given as a finite sum of r^e ln^k r.
/// Simpson in the grid variable plus the exact [0, r_min] tail from the
/// origin fit. Throws Divergence when f R^2 r^2 is not integrable at 0.
double expectation(const Eigenstate& state, const PowerLogSeries& f);

/// Same for an arbitrary weight. The small-r exponent of f is needed for the
/// tail; it is mandatory for singular states (Precondition otherwise).
double expectation(const Eigenstate& state, const std::function<double(double)>& f,
                   std::optional<double> endpoint_exponent);

/// R^{(l)}(0) = l! a_l for Regular states; Domain error otherwise.
double derivative_at_origin(const Eigenstate& state);

/// Norm from a quadrature using every second grid point (plus the tail).
double half_density_norm(const Eigenstate& state);

} // namespace hvl
