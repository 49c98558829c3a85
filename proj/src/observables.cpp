#include "hvl/observables.hpp"

#include "hvl/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace hvl {

namespace {

struct FitInput {
    const RadialProblem& problem;
    const SingularityClass& cls;
    const BoundaryCondition& bc;
    const LocalBasis& basis;
    double eigenvalue;
    const Grid& grid;
    const std::vector<double>& R;
};

PowerLogSeries admitted_local_u(const LocalBasis& basis, const BoundaryCondition& bc, double a_st, double a_add)
{
    using B = BoundaryCondition::Kind;
    if (bc.kind == B::Regular || bc.kind == B::StandardOnly || bc.tau == 0.0) {
        return a_st * basis.primary;
    }
    if (std::isinf(bc.tau)) {
        return a_add * basis.secondary;
    }
    return a_st * basis.primary + a_add * basis.secondary;
}

OriginFit fit_raw(const FitInput& in, const FitOptions& options)
{
    OriginFit fit;
    fit.bc_kind = in.bc.kind;
    const double r_min = in.grid.r_min();
    fit.r_lo = options.lo_factor * r_min;
    fit.r_hi = options.hi_factor * r_min;

    const PowerLogSeries A = build_effective_coefficient(in.problem, in.eigenvalue).series();
    const double tol = options.validity * std::max(std::abs(in.cls.c), 0.25);
    auto valid_at = [&](double r) { return std::abs(r * r * A(r) - in.cls.c) < tol; };
    while (!valid_at(fit.r_hi) && fit.r_hi > 8.0 * fit.r_lo) {
        fit.r_hi *= 0.5;
    }
    if (!valid_at(fit.r_hi)) {
        fit.warning = "small-r asymptotics not reached on the fit window";
    }

    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < in.grid.size(); ++i) {
        const double r = in.grid.r(i);
        if (r >= fit.r_lo && r <= fit.r_hi && in.R[i] != 0.0) {
            idx.push_back(i);
        }
    }
    if (idx.size() < 4) {
        throw Error(ErrorKind::Precondition, "origin fit window holds fewer than 4 grid points");
    }

    const bool log_fallback = in.bc.kind == BoundaryCondition::Kind::Singular && in.cls.P < options.min_P;
    std::function<double(double)> b1;
    std::function<double(double)> b2;
    if (log_fallback) {
        fit.warning = "P below " + std::to_string(options.min_P) +
                      ": exponents nearly degenerate, fitted through the logarithmic basis";
        b1 = [](double r) { return 1.0 / std::sqrt(r); };
        b2 = [](double r) { return std::log(r) / std::sqrt(r); };
    } else {
        b1 = [&](double r) { return in.basis.primary(r) / r; };
        b2 = [&](double r) { return in.basis.secondary(r) / r; };
    }

    const Eigen::Index rows = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd M(rows, 2);
    Eigen::VectorXd y(rows);
    for (Eigen::Index k = 0; k < rows; ++k) {
        const std::size_t i = idx[static_cast<std::size_t>(k)];
        const double r = in.grid.r(i);
        const double w = 1.0 / std::abs(in.R[i]);
        M(k, 0) = b1(r) * w;
        M(k, 1) = b2(r) * w;
        y(k) = in.R[i] * w;
    }
    Eigen::Vector2d colscale(M.col(0).norm(), M.col(1).norm());
    for (int c = 0; c < 2; ++c) {
        if (colscale(c) > 0.0) {
            M.col(c) /= colscale(c);
        }
    }
    Eigen::Vector2d coef = M.colPivHouseholderQr().solve(y);
    for (int c = 0; c < 2; ++c) {
        if (colscale(c) > 0.0) {
            coef(c) /= colscale(c);
        }
    }
    double ss = 0.0;
    for (Eigen::Index k = 0; k < rows; ++k) {
        const std::size_t i = idx[static_cast<std::size_t>(k)];
        const double r = in.grid.r(i);
        const double model = coef(0) * b1(r) + coef(1) * b2(r);
        const double d = (in.R[i] - model) / in.R[i];
        ss += d * d;
    }
    fit.residual = std::sqrt(ss / static_cast<double>(rows));

    if (log_fallback) {
        // a_st r^P + a_add r^-P ~ (a_st + a_add) + P (a_st - a_add) ln r
        const double P = in.cls.P;
        fit.a_st = 0.5 * (coef(0) + coef(1) / P);
        fit.a_add = 0.5 * (coef(0) - coef(1) / P);
    } else {
        fit.a_st = coef(0);
        fit.a_add = coef(1);
    }
    fit.local_u = admitted_local_u(in.basis, in.bc, fit.a_st, fit.a_add);
    return fit;
}

double tail_integral(const PowerLogSeries& integrand, double r_min)
{
    return integrand.empty() ? 0.0 : integrand.integral_from_zero(r_min);
}

double simpson_norm(const Grid& grid, const std::vector<double>& u, std::size_t stride)
{
    const std::size_t n = (grid.size() - 1) / stride + 1;
    const double h = grid.step() * static_cast<double>(stride);
    auto g = [&](std::size_t k) {
        const std::size_t i = k * stride;
        return u[i] * u[i] * grid.jacobian(i);
    };
    double total = 0.0;
    std::size_t simpson_points = n % 2 == 1 ? n : n - 1;
    const auto w = simpson_weights(simpson_points, h);
    for (std::size_t k = 0; k < simpson_points; ++k) {
        total += w[k] * g(k);
    }
    if (simpson_points != n) {
        total += 0.5 * h * (g(n - 2) + g(n - 1));
    }
    return total;
}

} // namespace

int count_sign_changes(const std::vector<double>& values)
{
    double peak = 0.0;
    for (double v : values) {
        peak = std::max(peak, std::abs(v));
    }
    const double floor = 1e-14 * peak;
    int changes = 0;
    int prev = 0;
    for (double v : values) {
        if (std::abs(v) <= floor) {
            continue;
        }
        const int s = v > 0 ? 1 : -1;
        if (prev != 0 && s != prev) {
            ++changes;
        }
        prev = s;
    }
    return changes;
}

Eigenstate assemble_state(const RadialProblem& problem, const SingularityClass& cls, const BoundaryCondition& bc,
                          double eigenvalue, const Grid& grid, std::vector<double> u, std::string provenance,
                          double* u_scale_to_unit, bool normalize)
{
    if (u.size() != grid.size()) {
        throw Error(ErrorKind::Precondition, "state values do not match the grid");
    }
    Eigenstate st;
    st.problem = problem;
    st.cls = cls;
    st.bc = bc;
    st.eigenvalue = eigenvalue;
    st.grid = grid;
    st.l = problem.l;
    st.provenance = std::move(provenance);
    st.basis = local_basis(problem, eigenvalue, cls);

    std::vector<double> R(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        R[i] = u[i] / grid.r(i);
    }
    OriginFit fit = fit_raw({problem, cls, bc, st.basis, eigenvalue, grid, R}, {});
    const double norm = simpson_norm(grid, u, 1) + tail_integral(fit.local_u * fit.local_u, grid.r_min());
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw Error(ErrorKind::Range, "state has zero or non-finite norm");
    }
    double s = normalize ? 1.0 / std::sqrt(norm) : 1.0;
    const auto first = std::find_if(u.begin(), u.end(), [](double v) { return v != 0.0; });
    if (first != u.end() && *first < 0.0) {
        s = -s;
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] *= s;
        R[i] *= s;
    }
    fit.a_st *= s;
    fit.a_add *= s;
    fit.local_u *= s;
    st.u = std::move(u);
    st.R = std::move(R);
    st.origin = std::move(fit);
    st.nodes = count_sign_changes(st.u);
    st.norm_check = half_density_norm(st);
    if (u_scale_to_unit) {
        *u_scale_to_unit = s;
    }
    return st;
}

OriginFit fit_origin(const Eigenstate& state, const FitOptions& options)
{
    return fit_raw({state.problem, state.cls, state.bc, state.basis, state.eigenvalue, state.grid, state.R},
                   options);
}

double half_density_norm(const Eigenstate& state)
{
    const auto& lu = state.origin.local_u;
    return simpson_norm(state.grid, state.u, 2) + tail_integral(lu * lu, state.grid.r_min());
}

double expectation(const Eigenstate& state, const PowerLogSeries& f)
{
    const auto& lu = state.origin.local_u;
    const PowerLogSeries tail = f * (lu * lu);
    if (!tail.integrable_at_zero()) {
        throw Error(ErrorKind::Divergence, "average diverges at the origin: integrand ~ r^" +
                                               std::to_string(tail.min_exponent()));
    }
    const Grid& g = state.grid;
    const auto w = simpson_weights(g.size(), g.step());
    double total = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double u = state.u[i];
        if (u == 0.0) {
            continue;
        }
        total += w[i] * f(g.r(i)) * u * u * g.jacobian(i);
    }
    return total + tail_integral(tail, g.r_min());
}

double expectation(const Eigenstate& state, const std::function<double(double)>& f,
                   std::optional<double> endpoint_exponent)
{
    if (!endpoint_exponent && state.cls.singular()) {
        throw Error(ErrorKind::Precondition, "singular state: the weight's small-r exponent must be declared");
    }
    const Grid& g = state.grid;
    const double e = endpoint_exponent.value_or(0.0);
    const double r0 = g.r_min();
    const PowerLogSeries lead = PowerLogSeries::monomial(f(r0) * std::pow(r0, -e), e);
    const auto& lu = state.origin.local_u;
    const PowerLogSeries tail = lead * (lu * lu);
    if (!tail.integrable_at_zero()) {
        throw Error(ErrorKind::Divergence, "average diverges at the origin for the declared exponent");
    }
    const auto w = simpson_weights(g.size(), g.step());
    double total = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double u = state.u[i];
        if (u == 0.0) {
            continue;
        }
        total += w[i] * f(g.r(i)) * u * u * g.jacobian(i);
    }
    return total + tail_integral(tail, r0);
}

double derivative_at_origin(const Eigenstate& state)
{
    if (state.bc.kind != BoundaryCondition::Kind::Regular) {
        throw Error(ErrorKind::Domain, "derivative at the origin is undefined for a singular state");
    }
    return std::tgamma(state.l + 1.0) * state.origin.a_s();
}

} // namespace hvl
