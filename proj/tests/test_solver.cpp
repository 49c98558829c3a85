#include "hvl/errors.hpp"
#include "hvl/local.hpp"
#include "hvl/observables.hpp"
#include "hvl/oracles.hpp"
#include "hvl/solver.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace hvl;
using hvl::test::inverse_square_plus_linear;
using hvl::test::rel_diff;
using hvl::test::schroedinger;
using hvl::test::throws_kind;

namespace {

double derivative_at(const Grid& g, const std::vector<double>& u, std::size_t i)
{
    return (-u[i + 2] + 8.0 * u[i + 1] - 8.0 * u[i - 1] + u[i - 2]) / (12.0 * g.step()) / g.jacobian(i);
}

double peak(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

} // namespace

TEST_CASE("grid is strictly increasing with the requested ends")
{
    const Grid g(1e-6, 40.0, 1.0, 8001);
    CHECK(g.size() == 8001);
    CHECK(g.r_min() == doctest::Approx(1e-6).epsilon(1e-14));
    CHECK(g.r_max() == doctest::Approx(40.0).epsilon(1e-12));
    for (std::size_t i = 1; i < g.size(); ++i) {
        REQUIRE(g.r(i) > g.r(i - 1));
    }
    const Grid f = g.refined();
    CHECK(f.size() == 2 * g.size() - 1);
    CHECK(f.step() == doctest::Approx(0.5 * g.step()).epsilon(1e-14));
}

TEST_CASE("numerov: u'' = u from sinh seeds")
{
    const Grid g(1e-3, 6.0, 1.0, 8001);
    const auto sol = numerov_integrate(PowerLogSeries::constant(-1.0), g, Direction::Outward,
                                       {std::sinh(g.r(0)), std::sinh(g.r(1))});
    const auto u = sol.values();
    const std::size_t i = g.index_near(5.0);
    CHECK(rel_diff(u[i], std::sinh(g.r(i))) < 1e-9);
}

TEST_CASE("numerov: L = 0 reproduces u = r")
{
    const Grid g(1e-6, 20.0, 1.0, 4001);
    const auto u = numerov_integrate(PowerLogSeries{}, g, Direction::Outward, {g.r(0), g.r(1)}).values();
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        worst = std::max(worst, rel_diff(u[i], g.r(i)));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("numerov: hydrogen outward log-derivative")
{
    const RadialProblem p = schroedinger(PotentialSpec::coulomb(1.0));
    const auto cls = classify_singularity(p);
    const BoundaryCondition bc = BoundaryCondition::regular(0);
    const Grid g(1e-6, 12.0, 1.0, 8001);
    const LocalBasis basis = local_basis(p, -0.5, cls);
    const auto L = build_effective_coefficient(p, -0.5).with_centrifugal(0);
    const auto u = numerov_integrate(L, g, Direction::Outward, origin_seed(bc, g, basis)).values();
    const std::size_t i = g.index_near(10.0);
    const double r = g.r(i);
    // u = 2 r e^{-r}: R'/R = u'/u - 1/r = -1.
    CHECK(std::abs(derivative_at(g, u, i) / u[i] - 1.0 / r + 1.0) < 1e-6);
}

TEST_CASE("origin seeds")
{
    const Grid g(1e-6, 10.0, 1.0, 4001);
    const auto reg = origin_seed(BoundaryCondition::regular(0), g);
    CHECK(rel_diff(reg.second / reg.first, g.r(1) / g.r(0)) < 1e-14);

    const auto st = origin_seed(BoundaryCondition::singular(0.2, 0.0), g);
    CHECK(rel_diff(st.second / st.first, std::pow(g.r(1) / g.r(0), 0.7)) < 1e-13);

    const auto mix = origin_seed(BoundaryCondition::singular(0.2, 1.0), g);
    const double r0 = g.r(0);
    CHECK(rel_diff(mix.first / std::pow(r0, 0.7), 1.0 + std::pow(r0, -0.4)) < 1e-13);
    CHECK(std::abs(std::pow(1e-6, -0.4) - 251.18864315) < 1e-6);

    const auto add = origin_seed(BoundaryCondition::singular(0.2, INFINITY), g);
    CHECK(rel_diff(add.second / add.first, std::pow(g.r(1) / g.r(0), 0.3)) < 1e-13);

    const auto lg = origin_seed(BoundaryCondition::singular_log(0.5), g);
    const auto ulog = [](double r) { return std::sqrt(r) * (1.0 + 0.5 * std::log(r)); };
    CHECK(rel_diff(lg.second / lg.first, ulog(g.r(1)) / ulog(g.r(0))) < 1e-13);
}

TEST_CASE("hydrogen and oscillator ground states")
{
    SolverOptions o;
    o.bracket = std::make_pair(-0.6, -0.4);
    const Eigenstate h = solve_bound_state(schroedinger(PotentialSpec::coulomb(1.0)), BoundaryCondition::regular(0), 0, o);
    CHECK(std::abs(h.eigenvalue + 0.5) < 1e-8);
    CHECK(h.nodes == 0);

    const Eigenstate osc =
        solve_bound_state(schroedinger(PotentialSpec::power_law(0.5, 2.0)), BoundaryCondition::regular(0), 0);
    CHECK(std::abs(osc.eigenvalue - 1.5) < 1e-8);
}

TEST_CASE("inverse-square level with the K_P boundary condition")
{
    const double P = 0.2;
    const double tau = kp_matching_tau(P, 1.0);
    const auto [a_st, a_add] = kp_coefficients(P, 1.0);
    CHECK(rel_diff(tau, a_add / a_st) < 1e-12);
    const Eigenstate st =
        solve_bound_state(schroedinger(PotentialSpec::inverse_square(0.105)), BoundaryCondition::singular(P, tau), 0);
    CHECK(std::abs(st.eigenvalue + 0.5) < 1e-6);
}

TEST_CASE("state invariants: norm, origin, nodes")
{
    const RadialProblem hyd = schroedinger(PotentialSpec::coulomb(1.0));
    const RadialProblem sing = inverse_square_plus_linear(0.105, 0.1);
    std::vector<Eigenstate> states;
    for (int n = 0; n < 3; ++n) {
        states.push_back(solve_bound_state(hyd, BoundaryCondition::regular(0), n));
    }
    states.push_back(solve_bound_state(schroedinger(PotentialSpec::coulomb(1.0), 2), BoundaryCondition::regular(2), 0));
    states.push_back(solve_bound_state(sing, BoundaryCondition::singular(0.2, 1.0), 1));
    states.push_back(solve_bound_state(sing, BoundaryCondition::singular(0.2, 0.0), 0));
    for (std::size_t k = 0; k < states.size(); ++k) {
        const Eigenstate& s = states[k];
        CAPTURE(k);
        CHECK(std::abs(s.norm_check - 1.0) < 1e-8);
        CHECK(std::abs(expectation(s, PowerLogSeries::constant(1.0)) - 1.0) < 1e-8);
        CHECK(std::abs(s.grid.r_min() * s.R.front()) < 1e-4 * peak(s.R));
        CHECK(count_sign_changes(s.R) == s.nodes);
    }
    CHECK(states[1].nodes == 1);
    CHECK(states[2].nodes == 2);
    CHECK(std::abs(states[2].eigenvalue + 0.5 / 9.0) < 1e-8);
}

TEST_CASE("disjoint brackets give the same level")
{
    const RadialProblem p = schroedinger(PotentialSpec::coulomb(1.0));
    SolverOptions a, b;
    a.bracket = std::make_pair(-0.9, -0.45);
    b.bracket = std::make_pair(-0.55, -0.2);
    const double e1 = solve_bound_state(p, BoundaryCondition::regular(0), 0, a).eigenvalue;
    const double e2 = solve_bound_state(p, BoundaryCondition::regular(0), 0, b).eigenvalue;
    CHECK(std::abs(e1 - e2) < 1e-10);
}

TEST_CASE("regular solves do not leak the excluded branch")
{
    for (int l : {0, 1}) {
        const Eigenstate s = solve_bound_state(schroedinger(PotentialSpec::coulomb(1.0), l),
                                               BoundaryCondition::regular(l), 0);
        const double r = s.origin.r_hi;
        const double leak = std::abs(s.origin.a_add) * std::pow(r, -l - 1.0);
        CHECK(leak < 1e-6 * std::abs(s.origin.a_st) * std::pow(r, l));
    }
}

TEST_CASE("tau = 0 and tau = inf give single-branch fits")
{
    const RadialProblem p = inverse_square_plus_linear(0.105, 0.1);
    const Eigenstate st = solve_bound_state(p, BoundaryCondition::singular(0.2, 0.0), 0);
    CHECK(std::abs(st.origin.a_add / st.origin.a_st) < 1e-4);
    const Eigenstate add = solve_bound_state(p, BoundaryCondition::singular(0.2, INFINITY), 0);
    CHECK(std::abs(add.origin.a_st / add.origin.a_add) < 1e-4);
    // Fitted exponent of R on the window: -1/2 + P or -1/2 - P within 1%.
    for (const auto* s : {&st, &add}) {
        const std::size_t i = s->grid.index_near(s->origin.r_lo);
        const std::size_t j = s->grid.index_near(s->origin.r_hi);
        const double slope = std::log(s->R[j] / s->R[i]) / std::log(s->grid.r(j) / s->grid.r(i));
        const double want = s == &st ? -0.3 : -0.7;
        CHECK(std::abs(slope - want) < 0.01 * std::abs(want));
    }
}

TEST_CASE("solver errors")
{
    const RadialProblem super{EquationKind::kg_two_body(1.0), PotentialSpec::coulomb(1.2), 0};
    CHECK(throws_kind([&] { solve_bound_state(super, BoundaryCondition::singular(0.1, 0.0), 0); },
                      ErrorKind::Supercritical));
    SolverOptions o;
    o.bracket = std::make_pair(-0.4, -0.2);
    const RadialProblem hyd = schroedinger(PotentialSpec::coulomb(1.0));
    bool failed = false;
    try {
        solve_bound_state(hyd, BoundaryCondition::regular(0), 0, o);
    } catch (const Error& e) {
        failed = e.kind() == ErrorKind::NoEigenvalue || e.kind() == ErrorKind::NodeCount;
    }
    CHECK(failed);
    CHECK(throws_kind([&] { solve_bound_state(schroedinger(PotentialSpec::power_law(-1.0, 2.0)),
                                              BoundaryCondition::regular(0), 0); },
                      ErrorKind::Precondition));
    CHECK(throws_kind([&] { solve_bound_state(hyd, BoundaryCondition::singular(0.2, 1.0), 0); },
                      ErrorKind::Precondition));
}

TEST_CASE("massless two-body states")
{
    for (double P : {0.2, 0.3}) {
        for (CoulombSign sign : {CoulombSign::Attractive, CoulombSign::Repulsive}) {
            const RadialProblem p{EquationKind::kg_two_body(1.0), PotentialSpec::coulomb(massless_kg_alpha(P), sign), 0};
            const auto r = solve_kg_masslessness(p, kp_matching_tau(P, 1.0));
            CHECK(std::abs(r.M) < 1e-6);
        }
    }
    const RadialProblem p{EquationKind::kg_two_body(1.0), PotentialSpec::coulomb(massless_kg_alpha(0.3)), 0};
    CHECK(throws_kind([&] { solve_kg_masslessness(p, 0.0); }, ErrorKind::NoEigenvalue));
}

TEST_CASE("grid halving moves eigenvalues by < 1e-7 relative")
{
    const std::vector<std::pair<RadialProblem, BoundaryCondition>> cases{
        {schroedinger(PotentialSpec::coulomb(1.0)), BoundaryCondition::regular(0)},
        {schroedinger(PotentialSpec::power_law(0.5, 2.0), 1), BoundaryCondition::regular(1)},
        {inverse_square_plus_linear(0.105, 0.1), BoundaryCondition::singular(0.2, 1.0)},
        {inverse_square_plus_linear(0.125, 0.1), BoundaryCondition::singular_log(-0.3)},
    };
    for (const auto& [p, bc] : cases) {
        SolverOptions fine;
        fine.grid = hvl::test::halved(fine.grid);
        const double e1 = solve_bound_state(p, bc, 0).eigenvalue;
        const double e2 = solve_bound_state(p, bc, 0, fine).eigenvalue;
        CHECK(rel_diff(e1, e2) < 1e-7);
    }
}

TEST_CASE("one-body KG Coulomb level matches the closed form")
{
    const RadialProblem p{EquationKind::kg_one_body(1.0), PotentialSpec::coulomb(0.1), 0};
    const auto cls = classify_singularity(p);
    const Eigenstate s = solve_bound_state(p, BoundaryCondition::singular(cls.P, 0.0), 0);
    CHECK(rel_diff(s.eigenvalue, kg_one_body_coulomb_level(0, 0, 1.0, 0.1)) < 1e-9);
    const RadialProblem p2{EquationKind::kg_two_body(1.0), PotentialSpec::coulomb(0.4), 1};
    const Eigenstate s2 = solve_bound_state(p2, BoundaryCondition::standard_only(classify_singularity(p2).P), 0);
    CHECK(rel_diff(s2.eigenvalue, kg_two_body_coulomb_level(0, 1, 1.0, 0.4)) < 1e-9);
}
