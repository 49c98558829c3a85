#include "hvl/errors.hpp"
#include "hvl/model.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace hvl;
using hvl::test::rel_diff;
using hvl::test::schroedinger;
using hvl::test::throws_kind;
using K = SingularityClass::Kind;

TEST_CASE("classification examples")
{
    CHECK(classify_singularity(schroedinger(PotentialSpec::coulomb(1.0))).kind == K::Regular);

    const auto s = classify_singularity(schroedinger(PotentialSpec::inverse_square(0.105)));
    CHECK(s.kind == K::Singular);
    CHECK(std::abs(s.P - 0.2) < 1e-14);

    CHECK(classify_singularity(schroedinger(PotentialSpec::inverse_square(0.125))).kind == K::SingularLog);

    const RadialProblem kg{EquationKind::kg_two_body(1.0), PotentialSpec::coulomb(1.2), 0};
    CHECK(classify_singularity(kg).kind == K::Supercritical);
}

TEST_CASE("standard-only above P = 1/2 and the one-body KG index")
{
    const auto s = classify_singularity(schroedinger(PotentialSpec::inverse_square(0.1), 1));
    CHECK(s.kind == K::StandardOnly);
    CHECK(s.P >= 0.5);

    // One-body KG Coulomb: c = alpha^2, so P = sqrt(1/4 - alpha^2).
    const RadialProblem kg1{EquationKind::kg_one_body(1.0), PotentialSpec::coulomb(0.3), 0};
    const auto k1 = classify_singularity(kg1);
    CHECK(k1.kind == K::Singular);
    CHECK(std::abs(k1.P - std::sqrt(0.25 - 0.09)) < 1e-14);

    // Two-body KG Coulomb: c = alpha^2 / 4.
    const RadialProblem kg2{EquationKind::kg_two_body(1.0), PotentialSpec::coulomb(0.6), 0};
    CHECK(std::abs(classify_singularity(kg2).P - std::sqrt(0.25 - 0.09)) < 1e-14);
}

TEST_CASE("malformed metadata is a classification error")
{
    CHECK(throws_kind([] { classify_singularity(schroedinger(PotentialSpec::inverse_square(-0.1))); },
                      ErrorKind::Classification));
    CHECK(throws_kind([] { classify_singularity(schroedinger(PotentialSpec::power_law(1.0, -3.0))); },
                      ErrorKind::Classification));
    CHECK(throws_kind([] { classify_singularity(schroedinger(PotentialSpec::coulomb(1.0), -1)); },
                      ErrorKind::Classification));
    CHECK(throws_kind([] { classify_singularity(schroedinger(PotentialSpec::coulomb(1.0), 0, 0.0)); },
                      ErrorKind::Classification));
}

TEST_CASE("effective coefficient examples")
{
    const auto A = build_effective_coefficient(schroedinger(PotentialSpec::coulomb(1.0)), -0.5);
    CHECK(std::abs(A(1.0) - 1.0) < 1e-15);
    CHECK(std::abs(A.derivative(2.0) - (-2.0 / 4.0)) < 1e-15);

    const RadialProblem free{EquationKind::kg_two_body(1.0), PotentialSpec::power_law(0.0, 1.0), 0};
    const auto Af = build_effective_coefficient(free, 1.5);
    for (double r : {0.1, 1.0, 10.0}) {
        CHECK(std::abs(Af(r) - (1.5 * 1.5 / 4.0 - 1.0)) < 1e-15);
    }

    const RadialProblem kg1{EquationKind::kg_one_body(1.0), PotentialSpec::coulomb(0.5), 0};
    CHECK(std::abs(build_effective_coefficient(kg1, 0.9)(1.0) - 0.96) < 1e-14);
}

TEST_CASE("inverse-square limit and sign convention")
{
    const PotentialSpec v = PotentialSpec::inverse_square(0.3);
    for (double r : {1e-6, 1e-3, 1.0}) {
        CHECK(std::abs(r * r * v.value(r) + 0.3) < 1e-14);
        CHECK(std::isfinite(v.derivative(r)));
    }
}

TEST_CASE("classification ignores added regular terms")
{
    const auto base = classify_singularity(schroedinger(PotentialSpec::inverse_square(0.105)));
    for (const auto& extra : {PotentialSpec::coulomb(0.7), PotentialSpec::power_law(0.4, 2.0),
                              PotentialSpec::power_law(-1.0, 0.5)}) {
        const auto c = classify_singularity(
            schroedinger(PotentialSpec::sum({PotentialSpec::inverse_square(0.105), extra})));
        CHECK(c.kind == base.kind);
        CHECK(c.P == doctest::Approx(base.P).epsilon(1e-15));
    }
}

TEST_CASE("A shifts by 2m dE exactly")
{
    const RadialProblem p = schroedinger(
        PotentialSpec::sum({PotentialSpec::coulomb(0.8), PotentialSpec::power_law(0.3, 2.0)}), 1, 1.7);
    const auto A1 = build_effective_coefficient(p, -0.3);
    const auto A2 = build_effective_coefficient(p, 0.45);
    for (double r : {1e-4, 0.2, 3.0, 40.0}) {
        CHECK(std::abs((A2(r) - A1(r)) - 2 * 1.7 * 0.75) < 1e-12 * std::max(1.0, std::abs(A1(r))));
    }
}

TEST_CASE("P^2 + c = (l + 1/2)^2")
{
    for (int l : {0, 1, 2}) {
        for (double V0 : {0.05, 0.105, 0.9, 2.5}) {
            const auto s = classify_singularity(schroedinger(PotentialSpec::inverse_square(V0), l, 1.3));
            if (s.kind == K::Supercritical) {
                continue;
            }
            CHECK(std::abs(s.P * s.P + s.c - (l + 0.5) * (l + 0.5)) < 1e-13);
            CHECK(std::abs(s.c - 2 * 1.3 * V0) < 1e-13);
        }
    }
}
