#include "hvl/grid.hpp"

#include "hvl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hvl {

void GridSpec::validate() const
{
    if (!(r_min > 0.0) || !(switch_radius > 0.0) || n_inner < 10 || n_outer < 10 ||
        !(tail_decay > 0.0) || !(r_max_cap > switch_radius)) {
        throw Error(ErrorKind::Precondition, "invalid grid specification");
    }
    if (r_max > 0.0 && r_max <= r_min) {
        throw Error(ErrorKind::Precondition, "grid r_max must exceed r_min");
    }
}

int GridSpec::total_points() const
{
    const int n = n_inner + n_outer;
    return n % 2 == 1 ? n : n + 1;
}

double Grid::x_of(double r, double switch_radius) { return std::log(r) + r / switch_radius; }

double Grid::r_of(double x, double switch_radius)
{
    // Newton on g(t) = t + e^t / r_s - x, t = ln r. g is convex and increasing,
    // so starting right of the root gives monotone convergence.
    double t = x;
    if (switch_radius * x > 1.0) {
        t = std::min(x, std::log(switch_radius * x));
    }
    for (int it = 0; it < 100; ++it) {
        const double e = std::exp(t) / switch_radius;
        const double step = (t + e - x) / (1.0 + e);
        t -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(t))) {
            break;
        }
    }
    return std::exp(t);
}

Grid::Grid(double r_min, double r_max, double switch_radius, int points) : rs_(switch_radius)
{
    if (!(r_min > 0.0) || !(r_max > r_min) || points < 5 || points % 2 == 0) {
        throw Error(ErrorKind::Precondition, "grid needs 0 < r_min < r_max and an odd point count >= 5");
    }
    x0_ = x_of(r_min, rs_);
    const double x1 = x_of(r_max, rs_);
    h_ = (x1 - x0_) / (points - 1);
    r_.resize(points);
    j_.resize(points);
    for (int i = 0; i < points; ++i) {
        double r = r_of(x0_ + h_ * i, rs_);
        if (i == 0) {
            r = r_min;
        } else if (i == points - 1) {
            r = r_max;
        }
        r_[i] = r;
        j_[i] = r / (1.0 + r / rs_);
    }
}

Grid Grid::refined() const
{
    return Grid(r_min(), r_max(), rs_, static_cast<int>(2 * size() - 1));
}

std::size_t Grid::index_near(double r) const
{
    auto it = std::lower_bound(r_.begin(), r_.end(), r);
    if (it == r_.end()) {
        return r_.size() - 1;
    }
    std::size_t i = static_cast<std::size_t>(it - r_.begin());
    if (i > 0 && std::abs(r_[i - 1] - r) < std::abs(r_[i] - r)) {
        --i;
    }
    return i;
}

std::vector<double> simpson_weights(std::size_t n, double h)
{
    if (n < 3 || n % 2 == 0) {
        throw Error(ErrorKind::Precondition, "Simpson rule needs an odd number of points >= 3");
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        w[i] *= h / 3.0;
    }
    return w;
}

} // namespace hvl
