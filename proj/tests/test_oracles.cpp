#include "hvl/observables.hpp"
#include "hvl/oracles.hpp"
#include "hvl/solver.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace hvl;
using hvl::test::rel_diff;
using hvl::test::schroedinger;

namespace {

/// max |u'' + L u| / scale over the grid, from the analytic R, R', R''.
double ode_residual(const OracleState& s)
{
    const PowerLogSeries L = build_effective_coefficient(s.problem, s.eigenvalue).with_centrifugal(s.l);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.grid.size(); i += 7) {
        const double r = s.grid.r(i);
        const double R = s.radial(r);
        if (R == 0.0) {
            continue;
        }
        const double upp = r * s.radial_d2(r) + 2.0 * s.radial_d1(r);
        const double Lu = L(r) * r * R;
        const double scale = std::abs(upp) + std::abs(Lu) + std::abs(r * R);
        worst = std::max(worst, std::abs(upp + Lu) / scale);
    }
    return worst;
}

PowerLogSeries power(double e) { return PowerLogSeries::monomial(1.0, e); }

} // namespace

TEST_CASE("laguerre polynomials")
{
    CHECK(laguerre(0, 1.5, 2.0) == 1.0);
    CHECK(laguerre(1, 1.5, 2.0) == doctest::Approx(0.5));
    CHECK(laguerre(2, 0.0, 1.0) == doctest::Approx(-0.5));
    CHECK(laguerre(3, 1.0, 0.5) == doctest::Approx(4.0 - 6.0 * 0.5 + 2.0 * 0.25 - 0.125 / 6.0));
}

TEST_CASE("closed forms: energies, norms and the radial equation")
{
    std::vector<OracleState> states;
    for (int n = 1; n <= 3; ++n) {
        for (int l = 0; l < n; ++l) {
            states.push_back(hydrogen_state(n, l, 1.0, 1.0));
        }
    }
    states.push_back(hydrogen_state(2, 1, 2.0, 0.5));
    for (int nr = 0; nr <= 2; ++nr) {
        states.push_back(oscillator_state(nr, 1, 1.0, 1.0));
    }
    states.push_back(oscillator_state(1, 0, 0.5, 2.0));
    states.push_back(inverse_square_state(0.2, 1.0, 1.0));
    states.push_back(inverse_square_state(0.35, 0.7, 2.0, 1));
    states.push_back(massless_kg_state(0.2, 1.0));
    states.push_back(massless_kg_state(0.3, 1.0, 0, CoulombSign::Repulsive));

    for (std::size_t k = 0; k < states.size(); ++k) {
        const OracleState& s = states[k];
        CAPTURE(k);
        CHECK(std::abs(expectation(s, PowerLogSeries::constant(1.0)) - 1.0) < 1e-8);
        CHECK(ode_residual(s) < 1e-8);
    }
    CHECK(states[0].eigenvalue == doctest::Approx(-0.5));
    CHECK(states[6].eigenvalue == doctest::Approx(-2.0 * 0.25 / 8.0));
    CHECK(states[7].eigenvalue == doctest::Approx(2.5));
    CHECK(states[10].eigenvalue == doctest::Approx(2.0 * 3.5));
    CHECK(states[11].eigenvalue == doctest::Approx(-0.5));
    CHECK(states[12].eigenvalue == doctest::Approx(-0.49 / 4.0));
    CHECK(states[13].eigenvalue == 0.0);
}

TEST_CASE("K_P coefficients")
{
    for (double P : {0.1, 0.2, 0.4}) {
        const auto [a_st, a_add] = kp_coefficients(P, 1.3);
        CHECK(rel_diff(a_st * a_add, -1.3 * 1.3 / (2.0 * P * P)) < 1e-10);
        const OracleState s = inverse_square_state(P, 1.3, 1.0);
        CHECK(rel_diff(*s.exact_a_st, a_st) < 1e-14);
        CHECK(rel_diff(s.origin.a_st, a_st) < 1e-3);
        CHECK(rel_diff(s.origin.a_add, a_add) < 1e-3);
    }
    CHECK(rel_diff(kp_normalization(0.2, 1.0) * kp_normalization(0.2, 1.0),
                   2.0 * std::sin(std::numbers::pi * 0.2) / (std::numbers::pi * 0.2)) < 1e-14);
    // Closure of the K_P level: V0 = ((l+1/2)^2 - P^2)/(2m).
    const OracleState s = inverse_square_state(0.2, 1.0, 1.0);
    CHECK(s.problem.potential.value(2.0) == doctest::Approx(-0.105 / 4.0));
}

TEST_CASE("massless Klein-Gordon state")
{
    const double P = 0.3, m = 1.0;
    const OracleState s = massless_kg_state(P, m);
    CHECK(rel_diff(2.0 * P * P * *s.exact_a_st * *s.exact_a_add, -m * m) < 1e-10);
    CHECK(rel_diff(massless_kg_alpha(P), 2.0 * std::sqrt(0.25 - P * P)) < 1e-14);
    // R ~ sqrt(pi/(2 m)) N e^{-m r}/r (1 + (4P^2 - 1)/(8 m r)) at large r.
    const std::size_t i = s.grid.index_near(30.0);
    const std::size_t j = s.grid.index_near(45.0);
    auto scaled = [&](std::size_t k) {
        const double r = s.grid.r(k);
        return s.R[k] * std::exp(m * r) * r / (1.0 + (4.0 * P * P - 1.0) / (8.0 * m * r));
    };
    CHECK(rel_diff(scaled(i), scaled(j)) < 1e-3);
}

TEST_CASE("closed-form hydrogen moments")
{
    const double m = 1.0, alpha = 1.0, a = 1.0 / (m * alpha);
    for (int n = 1; n <= 3; ++n) {
        for (int l = 0; l < n; ++l) {
            CAPTURE(n);
            CAPTURE(l);
            const OracleState s = hydrogen_state(n, l, m, alpha);
            const double L = l * (l + 1.0);
            CHECK(rel_diff(expectation(s, power(1.0)), a * (3.0 * n * n - L) / 2.0) < 1e-7);
            CHECK(rel_diff(expectation(s, power(2.0)), a * a * n * n * (5.0 * n * n + 1.0 - 3.0 * L) / 2.0) < 1e-7);
            CHECK(rel_diff(expectation(s, power(-1.0)), 1.0 / (n * n * a)) < 1e-7);
            CHECK(rel_diff(expectation(s, power(-2.0)), 1.0 / (n * n * n * (l + 0.5) * a * a)) < 1e-7);
        }
    }
}

TEST_CASE("solver agrees with the closed forms")
{
    for (int n = 1; n <= 3; ++n) {
        const int l = n - 1;
        const OracleState o = hydrogen_state(n, l, 1.0, 1.0);
        const Eigenstate s = solve_bound_state(o.problem, BoundaryCondition::regular(l), 0);
        CHECK(rel_diff(s.eigenvalue, o.eigenvalue) < 1e-7);
        CHECK(rel_diff(expectation(s, power(1.0)), expectation(o, power(1.0))) < 1e-7);
    }
    const OracleState osc = oscillator_state(1, 2, 1.0, 1.0);
    const Eigenstate so = solve_bound_state(osc.problem, BoundaryCondition::regular(2), 1);
    CHECK(rel_diff(so.eigenvalue, osc.eigenvalue) < 1e-7);

    const OracleState kp = inverse_square_state(0.2, 1.0, 1.0);
    const Eigenstate sk = solve_bound_state(kp.problem, BoundaryCondition::singular(0.2, kp_matching_tau(0.2, 1.0)), 0);
    CHECK(rel_diff(sk.eigenvalue, kp.eigenvalue) < 1e-7);
    CHECK(rel_diff(expectation(sk, power(1.0)), expectation(kp, power(1.0))) < 1e-7);
    // Sample-wise agreement up to the sign convention.
    double worst = 0.0;
    for (std::size_t i = 0; i < sk.grid.size(); i += 11) {
        const double r = sk.grid.r(i);
        if (r > 0.01 && r < 10.0) {
            worst = std::max(worst, std::abs(sk.R[i] - kp.radial(r)) / std::abs(kp.radial(r)));
        }
    }
    CHECK(worst < 1e-5);
}
