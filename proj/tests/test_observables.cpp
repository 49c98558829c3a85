#include "hvl/errors.hpp"
#include "hvl/observables.hpp"
#include "hvl/oracles.hpp"
#include "hvl/solver.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace hvl;
using hvl::test::inverse_square_plus_linear;
using hvl::test::rel_diff;
using hvl::test::schroedinger;
using hvl::test::throws_kind;

namespace {

PowerLogSeries power(double e) { return PowerLogSeries::monomial(1.0, e); }

Eigenstate hydrogen(int nodes = 0, int l = 0, const SolverOptions& o = {})
{
    return solve_bound_state(schroedinger(PotentialSpec::coulomb(1.0), l), BoundaryCondition::regular(l), nodes, o);
}

} // namespace

TEST_CASE("hydrogen expectation values")
{
    const Eigenstate s = hydrogen();
    CHECK(std::abs(expectation(s, power(-1.0)) - 1.0) < 1e-8);
    CHECK(std::abs(expectation(s, power(1.0)) - 1.5) < 1e-8);
    CHECK(std::abs(expectation(s, power(2.0)) - 3.0) < 1e-8);
    CHECK(std::abs(expectation(s, power(-2.0)) - 2.0) < 1e-7);
    const double viaf = expectation(s, [](double r) { return r; }, std::nullopt);
    CHECK(std::abs(viaf - 1.5) < 1e-8);
}

TEST_CASE("oscillator <r^2>")
{
    const Eigenstate s = solve_bound_state(schroedinger(PotentialSpec::power_law(0.5, 2.0)), BoundaryCondition::regular(0), 0);
    CHECK(std::abs(expectation(s, power(2.0)) - 1.5) < 1e-8);
}

TEST_CASE("origin fit: regular and K_P states")
{
    const Eigenstate h = hydrogen();
    CHECK(std::abs(h.origin.a_s() - 2.0) < 1e-6);

    const double P = 0.2;
    const Eigenstate kp = solve_bound_state(schroedinger(PotentialSpec::inverse_square(0.105)),
                                            BoundaryCondition::singular(P, kp_matching_tau(P, 1.0)), 0);
    CHECK(rel_diff(kp.origin.a_st * kp.origin.a_add, -12.5) < 1e-3);

    const Eigenstate st = solve_bound_state(inverse_square_plus_linear(0.105, 0.1), BoundaryCondition::singular(P, 0.0), 0);
    CHECK(std::abs(st.origin.a_add / st.origin.a_st) < 1e-4);
}

TEST_CASE("derivative at the origin")
{
    CHECK(std::abs(derivative_at_origin(hydrogen()) - 2.0) < 1e-6);
    CHECK(std::abs(derivative_at_origin(hydrogen(0, 1)) - 1.0 / (2.0 * std::sqrt(6.0))) < 1e-6);
    const Eigenstate osc =
        solve_bound_state(schroedinger(PotentialSpec::power_law(0.5, 2.0)), BoundaryCondition::regular(0), 0);
    CHECK(std::abs(derivative_at_origin(osc) - 2.0 / std::pow(std::numbers::pi, 0.25)) < 1e-6);
}

TEST_CASE("observable errors")
{
    const Eigenstate kp = inverse_square_state(0.2, 1.0, 1.0);
    CHECK(throws_kind([&] { derivative_at_origin(kp); }, ErrorKind::Domain));
    CHECK(throws_kind([&] { expectation(kp, power(-2.0)); }, ErrorKind::Divergence));
    CHECK(throws_kind([&] { expectation(hydrogen(), power(-3.0)); }, ErrorKind::Divergence));
    CHECK(throws_kind([&] { expectation(kp, [](double r) { return r; }, std::nullopt); }, ErrorKind::Precondition));
}

TEST_CASE("expectation is linear")
{
    const Eigenstate s = solve_bound_state(inverse_square_plus_linear(0.105, 0.1), BoundaryCondition::singular(0.2, 1.0), 0);
    const PowerLogSeries f = power(1.0), g = power(-1.0), lg = PowerLogSeries::monomial(1.0, 0.0, 1);
    const double lhs = expectation(s, 2.0 * f - 0.5 * g + 3.0 * lg);
    const double rhs = 2.0 * expectation(s, f) - 0.5 * expectation(s, g) + 3.0 * expectation(s, lg);
    CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
}

TEST_CASE("expectations are stable under grid doubling")
{
    SolverOptions fine;
    fine.grid = hvl::test::halved(fine.grid);
    const RadialProblem p = inverse_square_plus_linear(0.105, 0.1);
    const auto bc = BoundaryCondition::singular(0.2, 1.0);
    const Eigenstate a = solve_bound_state(p, bc, 0);
    const Eigenstate b = solve_bound_state(p, bc, 0, fine);
    for (double e : {-1.0, 1.0, 2.0}) {
        CAPTURE(e);
        CHECK(rel_diff(expectation(a, power(e)), expectation(b, power(e))) < 1e-8);
    }
    const Eigenstate h1 = hydrogen(1), h2 = hydrogen(1, 0, fine);
    CHECK(rel_diff(expectation(h1, power(1.0)), expectation(h2, power(1.0))) < 1e-8);
}

TEST_CASE("origin coefficients barely move with the fit window")
{
    const Eigenstate s = solve_bound_state(inverse_square_plus_linear(0.105, 0.1), BoundaryCondition::singular(0.2, 1.0), 0);
    FitOptions shifted;
    shifted.lo_factor = 4.0;
    shifted.hi_factor = 200.0;
    const OriginFit a = fit_origin(s);
    const OriginFit b = fit_origin(s, shifted);
    CHECK(rel_diff(a.a_st, b.a_st) < 5e-3);
    CHECK(rel_diff(a.a_add, b.a_add) < 5e-3);
}

TEST_CASE("log-case fit")
{
    const Eigenstate s = solve_bound_state(inverse_square_plus_linear(0.125, 0.1), BoundaryCondition::singular_log(-0.3), 0);
    CHECK(s.origin.residual < 1e-3);
    CHECK(std::abs(s.origin.a_add / s.origin.a_st + 0.3) < 1e-3);
    CHECK(std::abs(half_density_norm(s) - 1.0) < 1e-8);
}
