#include "hvl/errors.hpp"
#include "hvl/fh.hpp"
#include "hvl/observables.hpp"
#include "hvl/solver.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <utility>

using namespace hvl;
using hvl::test::inverse_square_plus_linear;
using hvl::test::rel_diff;
using hvl::test::schroedinger;
using hvl::test::throws_kind;

namespace {

const RadialProblem kHydrogen = schroedinger(PotentialSpec::coulomb(1.0));
const RadialProblem kOscillator = schroedinger(PotentialSpec::power_law(0.5, 2.0));

Eigenstate swapped(Eigenstate s)
{
    std::swap(s.origin.a_st, s.origin.a_add);
    std::swap(s.exact_a_st, s.exact_a_add);
    return s;
}

} // namespace

TEST_CASE("numeric derivatives of closed-form levels")
{
    const auto bc = BoundaryCondition::regular(0);
    CHECK(std::abs(dE_dlambda_numeric(kHydrogen, bc, 0, ParameterHandle::coupling()).value + 1.0) < 1e-6);
    CHECK(std::abs(dE_dlambda_numeric(kHydrogen, bc, 0, ParameterHandle::mass()).value + 0.5) < 1e-6);
    CHECK(std::abs(dE_dlambda_numeric(kOscillator, bc, 0, ParameterHandle::frequency()).value - 1.5) < 1e-6);
    const NumericDerivative nd = dE_dlambda_numeric(kHydrogen, bc, 1, ParameterHandle::coupling());
    CHECK(nd.h == doctest::Approx(1e-4));
    CHECK(std::abs(nd.value + 0.25) < 1e-6);
}

TEST_CASE("parameter handles")
{
    const RadialProblem p = inverse_square_plus_linear(0.105, 0.1);
    CHECK(affects_P(p, ParameterHandle::coupling(0)));
    CHECK_FALSE(affects_P(p, ParameterHandle::coupling(1)));
    CHECK(affects_P(p, ParameterHandle::mass()));
    CHECK(affects_P(p, ParameterHandle::angular()));
    CHECK(parameter_value(p, ParameterHandle::coupling(1)) == 0.1);
    const RadialProblem q = with_parameter(p, ParameterHandle::coupling(1), 0.3);
    CHECK(q.potential.value(2.0) == doctest::Approx(-0.105 / 4.0 + 0.6));
    CHECK(potential_derivative(p, ParameterHandle::coupling(1))(3.0) == doctest::Approx(3.0));
    CHECK(parameter_value(kOscillator, ParameterHandle::frequency()) == doctest::Approx(1.0));
    const RadialProblem w = with_parameter(kOscillator, ParameterHandle::frequency(), 2.0);
    CHECK(w.potential.value(1.0) == doctest::Approx(2.0));
}

TEST_CASE("regular Feynman-Hellmann examples")
{
    const Eigenstate h = solve_bound_state(kHydrogen, BoundaryCondition::regular(0), 0);
    const IdentityReport a = fh_regular(h, ParameterHandle::coupling());
    CHECK(std::abs(a.rhs + 1.0) < 1e-7);
    CHECK(a.pass);
    const IdentityReport m = fh_regular(h, ParameterHandle::mass());
    CHECK(std::abs(m.rhs + 0.5) < 1e-7);
    CHECK(m.pass);
    const Eigenstate o = solve_bound_state(kOscillator, BoundaryCondition::regular(0), 0);
    const IdentityReport w = fh_regular(o, ParameterHandle::frequency());
    CHECK(std::abs(w.rhs - 1.5) < 1e-7);
    CHECK(w.pass);
}

TEST_CASE("regular Feynman-Hellmann over hydrogen and oscillator levels")
{
    for (int n = 1; n <= 3; ++n) {
        for (int l = 0; l < n; ++l) {
            const RadialProblem p = schroedinger(PotentialSpec::coulomb(1.0), l);
            const Eigenstate s = solve_bound_state(p, BoundaryCondition::regular(l), n - l - 1);
            for (const auto& handle : {ParameterHandle::mass(), ParameterHandle::coupling()}) {
                CAPTURE(n);
                CAPTURE(l);
                CHECK(fh_regular(s, handle).residual <= 1e-5);
            }
        }
    }
    for (int nr = 0; nr <= 2; ++nr) {
        const Eigenstate s = solve_bound_state(kOscillator, BoundaryCondition::regular(0), nr);
        for (const auto& handle : {ParameterHandle::mass(), ParameterHandle::coupling(), ParameterHandle::frequency()}) {
            CAPTURE(nr);
            CHECK(fh_regular(s, handle).residual <= 1e-5);
        }
    }
}

TEST_CASE("boundary correction vanishes on single-branch states")
{
    const RadialProblem p = inverse_square_plus_linear(0.105, 0.1);
    for (double tau : {0.0, static_cast<double>(INFINITY)}) {
        for (double mu : {0.05, 0.1, 0.4}) {
            const RadialProblem q = with_parameter(p, ParameterHandle::coupling(1), mu);
            const NumericDerivative nd =
                dE_dlambda_numeric(q, BoundaryCondition::singular(0.2, tau), 0, ParameterHandle::coupling(1));
            const BoundaryCorrection b = fh_boundary_correction(nd.center, nd.minus, nd.plus, nd.h, ParameterHandle::coupling(1));
            CAPTURE(tau);
            CAPTURE(mu);
            CHECK(std::abs(b.B) < 1e-8);
        }
    }
}

TEST_CASE("boundary correction: fixed coefficients and antisymmetry")
{
    const RadialProblem p = inverse_square_plus_linear(0.105, 0.1);
    const auto handle = ParameterHandle::coupling(1);
    const NumericDerivative nd = dE_dlambda_numeric(p, BoundaryCondition::singular(0.2, 1.0), 0, handle);
    const BoundaryCorrection fixed = fh_boundary_correction(nd.center, nd.center, nd.center, nd.h, handle);
    CHECK(fixed.B == 0.0);
    CHECK(fixed.bracket == 0.0);

    // Synthetic states with a lambda-dependent admixture.
    SolverOptions on_grid;
    on_grid.fixed_grid = nd.center.grid;
    const Eigenstate lo = solve_bound_state(p, BoundaryCondition::singular(0.2, 0.9), 0, on_grid);
    const Eigenstate hi = solve_bound_state(p, BoundaryCondition::singular(0.2, 1.1), 0, on_grid);
    const BoundaryCorrection b = fh_boundary_correction(nd.center, lo, hi, 0.2, handle);
    const BoundaryCorrection s = fh_boundary_correction(swapped(nd.center), swapped(lo), swapped(hi), 0.2, handle);
    CHECK(b.bracket != 0.0);
    CHECK(s.bracket == -b.bracket);
}

TEST_CASE("derivative theorem with a tau that moves with the parameter")
{
    // tau(mu) = 0.3 + 2 (mu - 0.5): the operator family changes with mu and the
    // origin term enters as dE/dmu = <r> + B/(2m), B the fitted Wronskian limit.
    const RadialProblem base = inverse_square_plus_linear(0.105, 0.5);
    const auto handle = ParameterHandle::coupling(1);
    const auto tau = [](double mu) { return 0.3 + 2.0 * (mu - 0.5); };
    const double mu = 0.5, h = 1e-3;
    const Eigenstate c = solve_bound_state(base, BoundaryCondition::singular(0.2, tau(mu)), 0);
    SolverOptions on_grid;
    on_grid.fixed_grid = c.grid;
    auto at = [&](double x) {
        return solve_bound_state(with_parameter(base, handle, x), BoundaryCondition::singular(0.2, tau(x)), 0, on_grid);
    };
    const Eigenstate lo = at(mu - h), hi = at(mu + h);
    const double dE = (hi.eigenvalue - lo.eigenvalue) / (2.0 * h);
    const BoundaryCorrection b = fh_boundary_correction(c, lo, hi, 2.0 * h, handle);
    const double avg = expectation(c, PowerLogSeries::monomial(1.0, 1.0));
    CHECK(std::abs(b.B) > 1e-2);
    CHECK(rel_diff(b.B, b.direct) < 1e-2);
    CHECK(rel_diff(dE, avg + b.B / 2.0) < 1e-3);
    CHECK(rel_diff(dE, avg - b.B / 2.0) > 1e-2);
}

TEST_CASE("singular Feynman-Hellmann with a regular perturbation")
{
    const RadialProblem p = inverse_square_plus_linear(0.105, 0.1);
    FhOptions o;
    o.tolerance = 1e-3;
    o.rel_step = 1e-3;
    for (double tau : {0.5, 1.0, 2.0}) {
        CAPTURE(tau);
        CHECK(fh_singular_schroedinger(p, BoundaryCondition::singular(0.2, tau), 0, ParameterHandle::coupling(1), o).pass);
    }
    const IdentityReport zero =
        fh_singular_schroedinger(p, BoundaryCondition::singular(0.2, 0.0), 0, ParameterHandle::coupling(1), o);
    const Eigenstate st = solve_bound_state(p, BoundaryCondition::singular(0.2, 0.0), 0);
    const IdentityReport reg = fh_regular(st, ParameterHandle::coupling(1), o);
    CHECK(zero.pass);
    CHECK(std::abs(zero.rhs - reg.rhs) < 1e-9);
    CHECK(std::abs(zero.detail("B")) < 1e-12);

    const RadialProblem q = inverse_square_plus_linear(0.125, 0.1);
    CHECK(fh_singular_schroedinger(q, BoundaryCondition::singular_log(-0.3), 0, ParameterHandle::coupling(1), o).pass);
}

TEST_CASE("refusals when the parameter moves P")
{
    const RadialProblem p = inverse_square_plus_linear(0.105, 0.1);
    const auto bc = BoundaryCondition::singular(0.2, 1.0);
    CHECK(throws_kind([&] { fh_singular_schroedinger(p, bc, 0, ParameterHandle::coupling(0)); }, ErrorKind::Refusal));
    CHECK(throws_kind([&] { fh_singular_schroedinger(p, bc, 0, ParameterHandle::mass()); }, ErrorKind::Refusal));
    CHECK(throws_kind([&] { check_fh_refusal(p, bc, ParameterHandle::angular()); }, ErrorKind::Refusal));
    CHECK(throws_kind([&] { check_fh_refusal(p, BoundaryCondition::singular(0.2, 0.0), ParameterHandle::angular()); },
                      ErrorKind::Refusal));
    CHECK(throws_kind([&] { check_fh_refusal(kHydrogen, BoundaryCondition::regular(0), ParameterHandle::angular()); },
                      ErrorKind::Precondition));
    CHECK(throws_kind([&] { check_fh_refusal(p, BoundaryCondition::singular(0.2, 0.0), ParameterHandle::coupling(0)); },
                      ErrorKind::Refusal));
    CHECK(throws_kind([&] { check_fh_refusal(p, BoundaryCondition::singular(0.2, INFINITY), ParameterHandle::mass()); },
                      ErrorKind::Refusal));
    CHECK_NOTHROW(check_fh_refusal(p, BoundaryCondition::singular(0.2, 1.0), ParameterHandle::coupling(1)));
    const Eigenstate c = solve_bound_state(p, bc, 0);
    CHECK(throws_kind([&] { fh_boundary_correction(c, c, c, 1e-4, ParameterHandle::coupling(0)); }, ErrorKind::Refusal));
}

TEST_CASE("one-body Klein-Gordon Feynman-Hellmann")
{
    const RadialProblem weak{EquationKind::kg_one_body(1.0), PotentialSpec::coulomb(0.1), 0};
    const auto cls = classify_singularity(weak);
    const auto bc = BoundaryCondition::singular(cls.P, 0.0);
    FhOptions o;
    o.tolerance = 1e-4;
    const IdentityReport a = fh_kg_onebody(weak, bc, 0, ParameterHandle::coupling(), o);
    const IdentityReport m = fh_kg_onebody(weak, bc, 0, ParameterHandle::mass(), o);
    CHECK(a.pass);
    CHECK(m.pass);
    // Closed form E = m / sqrt(1 + alpha^2 / (1/2 + sqrt(1/4 - alpha^2))^2) is linear in m.
    CHECK(std::abs(m.lhs - m.detail("eigenvalue")) < 1e-6);

    const RadialProblem strong{EquationKind::kg_one_body(1.0), PotentialSpec::coulomb(0.3), 0};
    FhOptions s;
    s.tolerance = 1e-3;
    s.rel_step = 1e-3;
    s.richardson_tol = 1e-5;
    const auto sbc = BoundaryCondition::singular(classify_singularity(strong).P, 0.05);
    CHECK(fh_kg_onebody(strong, sbc, 0, ParameterHandle::mass(), s).pass);
    CHECK(throws_kind([&] { fh_kg_onebody(strong, sbc, 0, ParameterHandle::coupling(), s); }, ErrorKind::Refusal));
}
