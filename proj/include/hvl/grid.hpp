#pragma once

#include <cstddef>
#include <vector>

namespace hvl {

/// Grid construction parameters.
///
/// The default point budget matches a 2000-point log-spaced inner region and a
/// 6000-point uniform outer region; both live on one smooth map (see Grid).
struct GridSpec {
    double r_min = 1e-6;
    /// Radius where the map turns from logarithmic to linear.
    double switch_radius = 1.0;
    /// <= 0 selects r_max automatically from the eigenparameter.
    double r_max = 0.0;
    int n_inner = 2000;
    int n_outer = 6000;
    /// Required value of the WKB exponent int sqrt(-L) dr past the outer turning point.
    double tail_decay = 32.0;
    /// Upper bound on the automatic r_max.
    double r_max_cap = 5000.0;

    void validate() const;
    int total_points() const;
};

/// Radial grid uniform in x = ln r + r / r_s.
///
/// Near the origin the spacing is geometric, beyond r_s it is nearly uniform
/// with dr -> r_s dx. The Jacobian J = dr/dx = r / (1 + r/r_s) is stored with
/// each point.
class Grid {
public:
    Grid() = default;
    Grid(double r_min, double r_max, double switch_radius, int points);

    std::size_t size() const noexcept { return r_.size(); }
    double r(std::size_t i) const { return r_[i]; }
    double jacobian(std::size_t i) const { return j_[i]; }
    const std::vector<double>& radii() const noexcept { return r_; }
    const std::vector<double>& jacobians() const noexcept { return j_; }

    double r_min() const noexcept { return r_.front(); }
    double r_max() const noexcept { return r_.back(); }
    double switch_radius() const noexcept { return rs_; }
    double step() const noexcept { return h_; }
    double x(std::size_t i) const { return x0_ + h_ * static_cast<double>(i); }

    /// Same endpoints, half the step (2N - 1 points).
    Grid refined() const;

    /// Index of the point closest to r.
    std::size_t index_near(double r) const;

    static double x_of(double r, double switch_radius);
    static double r_of(double x, double switch_radius);

private:
    double rs_ = 1.0;
    double x0_ = 0.0;
    double h_ = 0.0;
    std::vector<double> r_;
    std::vector<double> j_;
};

/// Composite Simpson weights on a uniform grid with odd point count, scaled by h.
std::vector<double> simpson_weights(std::size_t n, double h);

} // namespace hvl
