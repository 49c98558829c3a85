#pragma once

#include "hvl/errors.hpp"
#include "hvl/model.hpp"
#include "hvl/solver.hpp"

#include <cmath>
#include <functional>

namespace hvl::test {

inline double rel_diff(double a, double b)
{
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// True when f throws an hvl::Error of the given kind.
inline bool throws_kind(const std::function<void()>& f, ErrorKind kind)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}

inline RadialProblem schroedinger(PotentialSpec v, int l = 0, double m = 1.0)
{
    return {EquationKind::schroedinger(m), std::move(v), l};
}

/// V = -V0/r^2 + mu r.
inline RadialProblem inverse_square_plus_linear(double V0, double mu, double m = 1.0)
{
    return schroedinger(PotentialSpec::sum({PotentialSpec::inverse_square(V0), PotentialSpec::power_law(mu, 1.0)}),
                        0, m);
}

/// Spec with twice the points, i.e. half the step on the same map.
inline GridSpec halved(GridSpec spec)
{
    spec.n_inner *= 2;
    spec.n_outer *= 2;
    return spec;
}

} // namespace hvl::test
