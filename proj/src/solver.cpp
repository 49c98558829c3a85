#include "hvl/solver.hpp"

#include "hvl/errors.hpp"
#include "hvl/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

namespace hvl {

namespace {

constexpr double kRescale = 1e150;
const double kLogRescale = std::log(kRescale);

double geometric_term(double r, double rs)
{
    const double ar = r / rs;
    const double d = 1.0 + ar;
    return (0.25 + ar) / (d * d * d * d);
}

double scale_of(double a, double b) { return std::max({1.0, std::abs(a), std::abs(b)}); }

constexpr double kMinNumerovF = 0.5;

struct Run {
    std::vector<double> y;
    std::vector<double> ls;
    int nodes = 0;
};

// Numerov on f = 1 + h^2 Q / 12 from index `first` towards `last` (inclusive),
// starting values y(first), y(first +- 1).
Run numerov_run(const std::vector<double>& f, std::size_t first, std::size_t last, double y0, double y1)
{
    const std::size_t n = f.size();
    Run run;
    run.y.assign(n, 0.0);
    run.ls.assign(n, 0.0);
    const long step = last >= first ? 1 : -1;
    long i = static_cast<long>(first);
    run.y[i] = y0;
    run.y[i + step] = y1;
    double yp = y0;
    double yc = y1;
    double scale = 0.0;
    int sign_prev = (y1 > 0) - (y1 < 0);
    if (sign_prev == 0) {
        sign_prev = (y0 > 0) - (y0 < 0);
    }
    const long end = static_cast<long>(last);
    for (i = static_cast<long>(first) + step; i != end; i += step) {
        const double fn = f[i + step];
        double yn = ((12.0 - 10.0 * f[i]) * yc - f[i - step] * yp) / fn;
        if (!std::isfinite(yn)) {
            throw Error(ErrorKind::Range, "non-finite value during Numerov integration");
        }
        if (std::abs(yn) > kRescale) {
            yn /= kRescale;
            yc /= kRescale;
            scale += kLogRescale;
        }
        yp = yc;
        yc = yn;
        run.y[i + step] = yn;
        run.ls[i + step] = scale;
        const int s = (yn > 0) - (yn < 0);
        if (s != 0) {
            if (sign_prev != 0 && s != sign_prev) {
                ++run.nodes;
            }
            sign_prev = s;
        }
    }
    return run;
}

// Per-grid precomputation for one problem and boundary condition.
class Shooter {
public:
    Shooter(const RadialProblem& problem, const SingularityClass& cls, const BoundaryCondition& bc, Grid grid)
        : problem_(problem), cls_(cls), bc_(bc), grid_(std::move(grid))
    {
        const auto poly = coefficient_polynomial(problem_);
        const std::size_t n = grid_.size();
        a0_.resize(n);
        a1_.resize(n);
        a2_.resize(n);
        cent_.resize(n);
        j2_.resize(n);
        geom_.resize(n);
        f_.resize(n);
        const double ll = static_cast<double>(problem_.l) * (problem_.l + 1);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = grid_.r(i);
            a0_[i] = poly[0](r);
            a1_[i] = poly[1].empty() ? 0.0 : poly[1](r);
            a2_[i] = poly[2].empty() ? 0.0 : poly[2](r);
            cent_[i] = ll / (r * r);
            const double j = grid_.jacobian(i);
            j2_[i] = j * j;
            geom_[i] = geometric_term(r, grid_.switch_radius());
        }
    }

    const Grid& grid() const { return grid_; }

    /// False when h^2 |Q| / 12 is too large somewhere for Numerov to follow the solution.
    bool resolves(double eps)
    {
        fill(eps);
        return *std::min_element(f_.begin(), f_.end()) >= kMinNumerovF;
    }

    int nodes(double eps)
    {
        fill(eps);
        const auto [y0, y1] = seed_y(eps);
        return numerov_run(f_, 0, grid_.size() - 1, y0, y1).nodes;
    }

    double mismatch(double eps)
    {
        fill(eps);
        const std::size_t m = matching_index(eps);
        const auto [y0, y1] = seed_y(eps);
        const Run out = numerov_run(f_, 0, m + 1, y0, y1);
        const auto [t0, t1] = tail_y();
        const Run in = numerov_run(f_, grid_.size() - 1, m - 1, t0, t1);
        const double rho_out = ratio(out, m - 1, m);
        const double rho_in = ratio(in, m + 1, m);
        return (f_[m - 1] * rho_out + f_[m + 1] * rho_in - (12.0 - 10.0 * f_[m])) / grid_.step();
    }

    Eigenstate state(double eps)
    {
        fill(eps);
        const std::size_t m = matching_index(eps);
        const auto [y0, y1] = seed_y(eps);
        const Run out = numerov_run(f_, 0, m + 1, y0, y1);
        const auto [t0, t1] = tail_y();
        const Run in = numerov_run(f_, grid_.size() - 1, m - 1, t0, t1);
        if (out.y[m] == 0.0 || in.y[m] == 0.0) {
            throw Error(ErrorKind::NoEigenvalue, "matching point coincides with a node");
        }
        const double join = std::log(std::abs(out.y[m])) + out.ls[m] - std::log(std::abs(in.y[m])) - in.ls[m];
        const double join_sign = (out.y[m] > 0) == (in.y[m] > 0) ? 1.0 : -1.0;
        const std::size_t n = grid_.size();
        std::vector<double> logmag(n);
        std::vector<double> sign(n);
        for (std::size_t i = 0; i < n; ++i) {
            const bool outer = i > m;
            const double y = outer ? in.y[i] : out.y[i];
            const double ls = outer ? in.ls[i] + join : out.ls[i];
            logmag[i] = y == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(y)) + ls;
            sign[i] = (y > 0 ? 1.0 : -1.0) * (outer ? join_sign : 1.0);
        }
        const double ref = *std::max_element(logmag.begin(), logmag.end());
        std::vector<double> u(n);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = sign[i] * std::exp(logmag[i] - ref) * std::sqrt(grid_.jacobian(i));
        }
        double factor = 1.0;
        Eigenstate st = assemble_state(problem_, cls_, bc_, eps, grid_, std::move(u), "numerov", &factor);
        // u near the origin was exp(-ref) * (seed series), seed = primary + tau secondary
        const double a = factor * std::exp(-ref);
        using B = BoundaryCondition::Kind;
        if (bc_.kind == B::Regular || bc_.kind == B::StandardOnly) {
            st.exact_a_st = a;
            st.exact_a_add = 0.0;
        } else if (std::isinf(bc_.tau)) {
            st.exact_a_st = 0.0;
            st.exact_a_add = bc_.tau > 0 ? a : -a;
        } else {
            st.exact_a_st = a;
            st.exact_a_add = a * bc_.tau;
        }
        return st;
    }

private:
    void fill(double eps)
    {
        const double h2 = grid_.step() * grid_.step() / 12.0;
        for (std::size_t i = 0; i < f_.size(); ++i) {
            const double L = a0_[i] + eps * (a1_[i] + eps * a2_[i]) - cent_[i];
            f_[i] = 1.0 + h2 * (j2_[i] * L - geom_[i]);
        }
    }

    std::size_t matching_index(double eps) const
    {
        const std::size_t n = grid_.size();
        std::size_t m = n;
        for (std::size_t i = n; i-- > 0;) {
            const double L = a0_[i] + eps * (a1_[i] + eps * a2_[i]) - cent_[i];
            if (L > 0.0) {
                m = i;
                break;
            }
        }
        if (m == n) {
            m = grid_.index_near(grid_.switch_radius());
        }
        return std::clamp<std::size_t>(m, 2, n - 3);
    }

    std::pair<double, double> seed_y(double eps) const
    {
        const LocalBasis basis = local_basis(problem_, eps, cls_);
        const auto [u0, u1] = origin_seed(bc_, grid_, basis);
        return {u0 / std::sqrt(grid_.jacobian(0)), u1 / std::sqrt(grid_.jacobian(1))};
    }

    // Decaying WKB tail in x; Dirichlet when the end is not classically forbidden.
    std::pair<double, double> tail_y() const
    {
        const std::size_t n = grid_.size();
        const double h = grid_.step();
        const double q1 = (f_[n - 1] - 1.0) * 12.0 / (h * h);
        const double q2 = (f_[n - 2] - 1.0) * 12.0 / (h * h);
        if (q1 < 0.0 && q2 < 0.0) {
            const double k1 = std::sqrt(-q1);
            const double k2 = std::sqrt(-q2);
            return {1.0, std::exp(0.5 * h * (k1 + k2)) * std::sqrt(std::sqrt(k1 / k2))};
        }
        return {0.0, 1.0};
    }

    static double ratio(const Run& run, std::size_t a, std::size_t b)
    {
        return run.y[a] / run.y[b] * std::exp(run.ls[a] - run.ls[b]);
    }

    RadialProblem problem_;
    SingularityClass cls_;
    BoundaryCondition bc_;
    Grid grid_;
    std::vector<double> a0_, a1_, a2_, cent_, j2_, geom_, f_;
};

struct Level {
    double lo;
    double hi;
};

// Narrow a node bracket (N(lo) != N(hi)) and then locate the mismatch root.
double refine_level(Shooter& sh, double lo, double hi, const SolverOptions& options)
{
    const int n_lo = sh.nodes(lo);
    for (int it = 0; it < options.max_iterations && hi - lo > 1e-9 * scale_of(lo, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (sh.nodes(mid) == n_lo ? lo : hi) = mid;
    }
    double g_lo = sh.mismatch(lo);
    double g_hi = sh.mismatch(hi);
    for (int it = 0; it < 60 && !(std::signbit(g_lo) != std::signbit(g_hi)); ++it) {
        if (hi - lo <= 1e-15 * scale_of(lo, hi)) {
            break;
        }
        const double mid = 0.5 * (lo + hi);
        (sh.nodes(mid) == n_lo ? lo : hi) = mid;
        g_lo = sh.mismatch(lo);
        g_hi = sh.mismatch(hi);
    }
    if (std::signbit(g_lo) == std::signbit(g_hi) || !std::isfinite(g_lo) || !std::isfinite(g_hi)) {
        throw Error(ErrorKind::NoEigenvalue, "matching mismatch does not change sign in the bracket");
    }
    for (int it = 0; it < options.max_iterations; ++it) {
        if (hi - lo <= options.eig_tol * scale_of(lo, hi)) {
            break;
        }
        const double mid = 0.5 * (lo + hi);
        const double g = sh.mismatch(mid);
        if (std::signbit(g) == std::signbit(g_lo)) {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
            g_hi = g;
        }
    }
    // one secant (false-position) step inside the final bracket
    const double e = lo - g_lo * (hi - lo) / (g_hi - g_lo);
    return (e > lo && e < hi) ? e : 0.5 * (lo + hi);
}

} // namespace

std::vector<double> NumerovSolution::values(double reference) const
{
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        out[i] = u[i] * std::exp(log_scale[i] - reference);
    }
    return out;
}

NumerovSolution numerov_integrate(const PowerLogSeries& L, const Grid& grid, Direction direction,
                                  std::pair<double, double> seed)
{
    const std::size_t n = grid.size();
    if (n < 5) {
        throw Error(ErrorKind::Precondition, "grid too small for Numerov integration");
    }
    if (!std::isfinite(seed.first) || !std::isfinite(seed.second) || (seed.first == 0.0 && seed.second == 0.0)) {
        throw Error(ErrorKind::Precondition, "Numerov seed values must be finite and not both zero");
    }
    const double h2 = grid.step() * grid.step() / 12.0;
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid.r(i);
        const double j = grid.jacobian(i);
        const double Lv = L(r);
        if (!std::isfinite(Lv)) {
            throw Error(ErrorKind::Range, "non-finite coefficient at r = " + std::to_string(r));
        }
        f[i] = 1.0 + h2 * (j * j * Lv - geometric_term(r, grid.switch_radius()));
    }
    const bool out = direction == Direction::Outward;
    const std::size_t a = out ? 0 : n - 1;
    const std::size_t b = out ? 1 : n - 2;
    const std::size_t last = out ? n - 1 : 0;
    const Run run = numerov_run(f, a, last, seed.first / std::sqrt(grid.jacobian(a)),
                                seed.second / std::sqrt(grid.jacobian(b)));
    NumerovSolution sol;
    sol.u.resize(n);
    sol.log_scale = run.ls;
    for (std::size_t i = 0; i < n; ++i) {
        sol.u[i] = run.y[i] * std::sqrt(grid.jacobian(i));
    }
    return sol;
}

std::pair<double, double> origin_seed(const BoundaryCondition& bc, const Grid& grid)
{
    bc.validate();
    const double r0 = grid.r(0);
    const double r1 = grid.r(1);
    auto u = [&](double r) {
        switch (bc.kind) {
        case BoundaryCondition::Kind::Regular:
            return std::pow(r, bc.s + 1.0);
        case BoundaryCondition::Kind::StandardOnly:
            return std::pow(r, 0.5 + bc.P);
        case BoundaryCondition::Kind::Singular:
            if (std::isinf(bc.tau)) {
                return std::pow(r, 0.5 - bc.P);
            }
            return std::pow(r, 0.5 + bc.P) + bc.tau * std::pow(r, 0.5 - bc.P);
        case BoundaryCondition::Kind::SingularLog:
            if (std::isinf(bc.tau)) {
                return std::sqrt(r) * std::log(r);
            }
            return std::sqrt(r) * (1.0 + bc.tau * std::log(r));
        }
        return 0.0;
    };
    return {u(r0), u(r1)};
}

std::pair<double, double> origin_seed(const BoundaryCondition& bc, const Grid& grid, const LocalBasis& basis)
{
    const PowerLogSeries s = seed_series(basis, bc);
    return {s(grid.r(0)), s(grid.r(1))};
}

void SolverOptions::validate() const
{
    grid.validate();
    if (!(eig_tol > 0.0) || max_iterations < 10) {
        throw Error(ErrorKind::Precondition, "invalid solver tolerances");
    }
    if (bracket && !(bracket->first < bracket->second)) {
        throw Error(ErrorKind::Precondition, "bracket must satisfy lo < hi");
    }
    if (fixed_grid && fixed_grid->size() % 2 == 0) {
        throw Error(ErrorKind::Precondition, "fixed grid needs an odd number of points");
    }
}

double decay_threshold(const RadialProblem& problem)
{
    const double v_inf = potential_at_infinity(problem.potential);
    if (v_inf == -std::numeric_limits<double>::infinity()) {
        throw Error(ErrorKind::Precondition, "potential is unbounded below at large r");
    }
    const double m = problem.equation.m;
    switch (problem.equation.type) {
    case EquationKind::Type::Schroedinger:
        return v_inf;
    case EquationKind::Type::KleinGordonOneBody:
        return v_inf + m;
    case EquationKind::Type::KleinGordonTwoBody:
        return v_inf + 2.0 * m;
    }
    return v_inf;
}

double automatic_r_max(const RadialProblem& problem, double eigenparameter, const GridSpec& spec)
{
    if (spec.r_max > 0.0) {
        return spec.r_max;
    }
    const PowerLogSeries L = build_effective_coefficient(problem, eigenparameter).with_centrifugal(problem.l);
    const int samples = 4000;
    const double ratio = std::log(spec.r_max_cap / spec.r_min) / (samples - 1);
    double r_turn = -1.0;
    for (int k = samples - 1; k >= 0; --k) {
        const double r = spec.r_min * std::exp(ratio * k);
        if (L(r) > 0.0) {
            if (k == samples - 1) {
                return spec.r_max_cap;
            }
            r_turn = r;
            break;
        }
    }
    if (r_turn < 0.0) {
        r_turn = spec.switch_radius;
    }
    double r = r_turn;
    double decay = 0.0;
    while (decay < spec.tail_decay) {
        const double dr = 0.01 * std::max(r, spec.switch_radius);
        decay += std::sqrt(std::max(-L(r + 0.5 * dr), 0.0)) * dr;
        r += dr;
        if (r >= spec.r_max_cap) {
            return spec.r_max_cap;
        }
    }
    return std::max(r, 2.0 * spec.switch_radius);
}

Grid grid_for(const RadialProblem& problem, double eigenparameter, const GridSpec& spec)
{
    int points = spec.n_inner + spec.n_outer;
    points = ((points + 2) / 4) * 4 + 1; // 4k + 1, so the half-density rule is Simpson too
    return Grid(spec.r_min, automatic_r_max(problem, eigenparameter, spec), spec.switch_radius, points);
}

int outward_node_count(const RadialProblem& problem, const BoundaryCondition& bc, double eigenparameter,
                       const Grid& grid)
{
    const SingularityClass cls = classify_singularity(problem);
    check_compatible(bc, cls, problem.l);
    Shooter sh(problem, cls, bc, grid);
    return sh.nodes(eigenparameter);
}

double matching_mismatch(const RadialProblem& problem, const BoundaryCondition& bc, double eigenparameter,
                         const Grid& grid)
{
    const SingularityClass cls = classify_singularity(problem);
    check_compatible(bc, cls, problem.l);
    Shooter sh(problem, cls, bc, grid);
    return sh.mismatch(eigenparameter);
}

Eigenstate solve_bound_state(const RadialProblem& problem, const BoundaryCondition& bc, int nodes,
                             const SolverOptions& options)
{
    options.validate();
    const SingularityClass cls = classify_singularity(problem);
    if (cls.kind == SingularityClass::Kind::Supercritical) {
        throw Error(ErrorKind::Supercritical, "supercritical coupling: (l+1/2)^2 - c = " +
                                                  std::to_string(cls.radicand) + " < 0; refusing to solve");
    }
    check_compatible(bc, cls, problem.l);
    if (nodes < 0) {
        throw Error(ErrorKind::Precondition, "node count must be >= 0");
    }

    const double threshold = decay_threshold(problem);
    std::unique_ptr<Shooter> sh;
    double sh_rmax = 0.0;
    auto ensure = [&](double e_ref) {
        if (options.fixed_grid) {
            if (!sh) {
                sh = std::make_unique<Shooter>(problem, cls, bc, *options.fixed_grid);
            }
            return;
        }
        const double rmax = automatic_r_max(problem, e_ref, options.grid);
        if (!sh || rmax > sh_rmax * (1.0 + 1e-12) || rmax < 0.5 * sh_rmax) {
            sh = std::make_unique<Shooter>(problem, cls, bc, grid_for(problem, e_ref, options.grid));
            sh_rmax = rmax;
        }
    };

    // Node counts at energies the working grid cannot resolve come from a grid built for that energy.
    std::unique_ptr<Shooter> aux;
    double aux_rmax = 0.0;
    auto count = [&](double eps) {
        if (sh->resolves(eps)) {
            return sh->nodes(eps);
        }
        const double rmax = automatic_r_max(problem, eps, options.grid);
        if (!aux || rmax > aux_rmax * (1.0 + 1e-12) || !aux->resolves(eps)) {
            aux = std::make_unique<Shooter>(problem, cls, bc, grid_for(problem, eps, options.grid));
            aux_rmax = rmax;
            if (!aux->resolves(eps)) {
                throw Error(ErrorKind::Range, "eigenparameter " + std::to_string(eps) +
                                                  " is not resolved by the grid point budget");
            }
        }
        return aux->nodes(eps);
    };

    double lo = 0.0;
    double hi = 0.0;
    if (options.bracket) {
        lo = options.bracket->first;
        hi = options.bracket->second;
        ensure(hi);
        const int n_lo = count(lo);
        const int n_hi = count(hi);
        if (n_lo == n_hi) {
            throw Error(ErrorKind::NoEigenvalue, "bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                                     "] contains no level (node count " +
                                                     std::to_string(n_lo) + " at both ends)");
        }
        if (nodes < n_lo || nodes >= n_hi) {
            throw Error(ErrorKind::NodeCount, "requested node count " + std::to_string(nodes) +
                                                  " is not attainable in the bracket (nodes " +
                                                  std::to_string(n_lo) + ".." + std::to_string(n_hi) + ")");
        }
    } else {
        const bool finite_top = std::isfinite(threshold);
        const double scale = finite_top ? std::max(1.0, std::abs(threshold)) : 1.0;
        hi = finite_top ? threshold - 1e-3 * scale : 1.0;
        const bool kg = problem.equation.type != EquationKind::Type::Schroedinger;
        lo = kg && hi > 0.0 ? 0.0 : hi - 1.0;
        ensure(hi);
        int guard = 0;
        while (count(hi) <= nodes) {
            if (++guard > 200) {
                throw Error(ErrorKind::NodeCount, "could not bracket the requested level from above");
            }
            if (finite_top) {
                hi = threshold - (threshold - hi) / 10.0;
                if (threshold - hi < 1e-12 * scale) {
                    throw Error(ErrorKind::NodeCount, "requested level is not resolved below the threshold");
                }
            } else {
                hi += 2.0 * (hi - lo);
            }
            ensure(hi);
        }
        guard = 0;
        while (count(lo) > nodes) {
            if (++guard > 200) {
                throw Error(ErrorKind::NodeCount, "could not bracket the requested level from below");
            }
            lo -= 2.0 * (hi - lo);
        }
    }

    // phase 1: node-count bisection
    const double lo0 = lo;
    const double hi0 = hi;
    for (int it = 0; it < options.max_iterations && hi - lo > 1e-7 * scale_of(lo, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (count(mid) > nodes ? hi : lo) = mid;
        ensure(hi);
    }

    // phase 2: grid for the located level, confirm the bracket, refine on the mismatch
    if (!options.fixed_grid) {
        sh = std::make_unique<Shooter>(problem, cls, bc, grid_for(problem, hi, options.grid));
    }
    double width = hi - lo;
    for (int it = 0; it < 40; ++it) {
        if (count(lo) <= nodes && count(hi) > nodes) {
            break;
        }
        width *= 4.0;
        lo = std::max(lo0, lo - width);
        hi = std::min(hi0, hi + width);
        if (lo == lo0 && hi == hi0 && !(count(lo) <= nodes && count(hi) > nodes)) {
            throw Error(ErrorKind::NodeCount, "level with " + std::to_string(nodes) +
                                                  " nodes is not bracketed on the refined grid");
        }
    }
    for (int it = 0; it < options.max_iterations && hi - lo > 1e-7 * scale_of(lo, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (count(mid) > nodes ? hi : lo) = mid;
    }
    const double eps = refine_level(*sh, lo, hi, options);
    Eigenstate st = sh->state(eps);
    if (st.nodes != nodes) {
        throw Error(ErrorKind::NodeCount, "solved state has " + std::to_string(st.nodes) + " nodes, requested " +
                                              std::to_string(nodes));
    }
    return st;
}

double kp_matching_tau(double P, double kappa)
{
    return -std::pow(0.5 * kappa, -2.0 * P) * specfun::gamma(1.0 + P) / specfun::gamma(1.0 - P);
}

MasslessResult solve_kg_masslessness(const RadialProblem& problem, double tau, const SolverOptions& options,
                                     double window)
{
    options.validate();
    if (problem.equation.type != EquationKind::Type::KleinGordonTwoBody) {
        throw Error(ErrorKind::Precondition, "massless search needs the two-body Klein-Gordon equation");
    }
    const SingularityClass cls = classify_singularity(problem);
    if (cls.kind == SingularityClass::Kind::Supercritical) {
        throw Error(ErrorKind::Supercritical, "supercritical coupling; refusing to solve");
    }
    if (cls.kind != SingularityClass::Kind::Singular) {
        throw Error(ErrorKind::Precondition, "massless search needs 0 < P < 1/2");
    }
    const BoundaryCondition bc = BoundaryCondition::singular(cls.P, tau);
    const double m = problem.equation.m;
    const double w = window > 0.0 ? window : 0.25 * m;
    Shooter sh(problem, cls, bc, options.fixed_grid ? *options.fixed_grid : grid_for(problem, 0.0, options.grid));

    const int samples = 41;
    std::vector<double> Ms(samples);
    std::vector<int> ns(samples);
    std::vector<double> gs(samples);
    for (int k = 0; k < samples; ++k) {
        Ms[k] = -w + 2.0 * w * k / (samples - 1);
        ns[k] = sh.nodes(Ms[k]);
        gs[k] = sh.mismatch(Ms[k]);
    }
    int best = -1;
    for (int k = 0; k + 1 < samples; ++k) {
        if (std::abs(ns[k + 1] - ns[k]) == 1) {
            if (best < 0 || std::abs(Ms[k] + Ms[k + 1]) < std::abs(Ms[best] + Ms[best + 1])) {
                best = k;
            }
        }
    }
    if (best < 0) {
        throw Error(ErrorKind::NoEigenvalue, "no bound state with M in [-" + std::to_string(w) + ", " +
                                                 std::to_string(w) + "] for tau = " + std::to_string(tau));
    }
    const double M = refine_level(sh, Ms[best], Ms[best + 1], options);
    return {M, sh.state(M)};
}

} // namespace hvl
