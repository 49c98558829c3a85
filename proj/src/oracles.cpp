#include "hvl/oracles.hpp"

#include "hvl/errors.hpp"
#include "hvl/solver.hpp"
#include "hvl/specfun.hpp"

#include <cmath>
#include <numbers>

namespace hvl {

namespace {

constexpr double kPi = std::numbers::pi;

OracleState finish(const RadialProblem& problem, const BoundaryCondition& bc, double eigenvalue,
                   const GridSpec& spec, std::function<double(double)> R, std::function<double(double)> d1,
                   std::function<double(double)> d2, std::string tag, double a_st, double a_add)
{
    const SingularityClass cls = classify_singularity(problem);
    const Grid grid = grid_for(problem, eigenvalue, spec);
    std::vector<double> u(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        u[i] = grid.r(i) * R(grid.r(i));
    }
    OracleState st;
    static_cast<Eigenstate&>(st) =
        assemble_state(problem, cls, bc, eigenvalue, grid, std::move(u), std::move(tag), nullptr, false);
    st.exact_a_st = a_st;
    st.exact_a_add = a_add;
    st.radial = std::move(R);
    st.radial_d1 = std::move(d1);
    st.radial_d2 = std::move(d2);
    return st;
}

// Value and first two derivatives of a product of three factors.
struct Jet {
    double v, d1, d2;
};

Jet product(const Jet& a, const Jet& b, const Jet& c)
{
    return {a.v * b.v * c.v, a.d1 * b.v * c.v + a.v * b.d1 * c.v + a.v * b.v * c.d1,
            a.d2 * b.v * c.v + a.v * b.d2 * c.v + a.v * b.v * c.d2 +
                2.0 * (a.d1 * b.d1 * c.v + a.d1 * b.v * c.d1 + a.v * b.d1 * c.d1)};
}

Jet power_jet(double r, int l)
{
    const double p = std::pow(r, l);
    return {p, l == 0 ? 0.0 : l * std::pow(r, l - 1), l < 2 ? 0.0 : l * (l - 1.0) * std::pow(r, l - 2)};
}

Jet kp_jet(double P, double kappa, double N, double r)
{
    const double z = kappa * r;
    const double K = specfun::bessel_k(P, z);
    const double Kd = -0.5 * (specfun::bessel_k(P - 1.0, z) + specfun::bessel_k(P + 1.0, z));
    const double Kdd = ((z * z + P * P) * K - z * Kd) / (z * z);
    const double s = 1.0 / std::sqrt(r);
    return {N * s * K, N * (-0.5 * s / r * K + s * kappa * Kd),
            N * (0.75 * s / (r * r) * K - s / r * kappa * Kd + s * kappa * kappa * Kdd)};
}

} // namespace

double laguerre(int n, double alpha, double x)
{
    if (n < 0) {
        return 0.0;
    }
    double prev = 1.0;
    if (n == 0) {
        return prev;
    }
    double cur = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

OracleState hydrogen_state(int n, int l, double m, double alpha, const GridSpec& spec)
{
    if (n < 1 || l < 0 || l >= n || !(m > 0.0) || !(alpha > 0.0)) {
        throw Error(ErrorKind::Precondition, "hydrogen state needs n >= 1, 0 <= l < n, m > 0, alpha > 0");
    }
    const RadialProblem problem{EquationKind::schroedinger(m), PotentialSpec::coulomb(alpha), l};
    const double E = -m * alpha * alpha / (2.0 * n * n);
    const double a = 1.0 / (m * alpha);
    const double k = 2.0 / (n * a); // rho = k r
    const int nr = n - l - 1;
    const double norm = std::sqrt(k * k * k * std::tgamma(nr + 1.0) / (2.0 * n * std::tgamma(n + l + 1.0)));
    const double lag_alpha = 2.0 * l + 1.0;
    auto jet = [=](double r) {
        const double rho = k * r;
        const Jet p = power_jet(rho, l);
        const double e = std::exp(-0.5 * rho);
        const Jet ex{e, -0.5 * e, 0.25 * e};
        const Jet lag{laguerre(nr, lag_alpha, rho), -laguerre(nr - 1, lag_alpha + 1.0, rho),
                      laguerre(nr - 2, lag_alpha + 2.0, rho)};
        const Jet g = product(p, ex, lag);
        return Jet{norm * g.v, norm * k * g.d1, norm * k * k * g.d2};
    };
    const double a_s = norm * std::pow(k, l) * laguerre(nr, lag_alpha, 0.0);
    return finish(
        problem, BoundaryCondition::regular(l), E, spec, [=](double r) { return jet(r).v; },
        [=](double r) { return jet(r).d1; }, [=](double r) { return jet(r).d2; },
        "hydrogen(n=" + std::to_string(n) + ",l=" + std::to_string(l) + ")", a_s, 0.0);
}

OracleState oscillator_state(int nr, int l, double m, double omega, const GridSpec& spec)
{
    if (nr < 0 || l < 0 || !(m > 0.0) || !(omega > 0.0)) {
        throw Error(ErrorKind::Precondition, "oscillator state needs nr >= 0, l >= 0, m > 0, omega > 0");
    }
    const RadialProblem problem{EquationKind::schroedinger(m), PotentialSpec::power_law(0.5 * m * omega * omega, 2.0),
                                l};
    const double E = omega * (2.0 * nr + l + 1.5);
    const double beta = m * omega;
    const double lag_alpha = l + 0.5;
    const double norm =
        std::sqrt(2.0 * std::pow(beta, l + 1.5) * std::tgamma(nr + 1.0) / std::tgamma(nr + l + 1.5));
    auto jet = [=](double r) {
        const Jet p = power_jet(r, l);
        const double e = std::exp(-0.5 * beta * r * r);
        const Jet ex{e, -beta * r * e, (beta * beta * r * r - beta) * e};
        const double t = beta * r * r;
        const double L1 = -laguerre(nr - 1, lag_alpha + 1.0, t);
        const double L2 = laguerre(nr - 2, lag_alpha + 2.0, t);
        const Jet lag{laguerre(nr, lag_alpha, t), 2.0 * beta * r * L1, 2.0 * beta * L1 + 4.0 * beta * beta * r * r * L2};
        const Jet g = product(p, ex, lag);
        return Jet{norm * g.v, norm * g.d1, norm * g.d2};
    };
    const double a_s = norm * laguerre(nr, lag_alpha, 0.0);
    return finish(
        problem, BoundaryCondition::regular(l), E, spec, [=](double r) { return jet(r).v; },
        [=](double r) { return jet(r).d1; }, [=](double r) { return jet(r).d2; },
        "oscillator(nr=" + std::to_string(nr) + ",l=" + std::to_string(l) + ")", a_s, 0.0);
}

double kp_normalization(double P, double kappa)
{
    return std::sqrt(2.0 * kappa * kappa * std::sin(kPi * P) / (kPi * P));
}

std::pair<double, double> kp_coefficients(double P, double kappa)
{
    // K_P(z) = pi / (2 sin P pi) [I_{-P}(z) - I_P(z)], I_{+-P}(z) ~ (z/2)^{+-P} / Gamma(1 +- P)
    const double N = kp_normalization(P, kappa);
    const double pref = N * kPi / (2.0 * std::sin(kPi * P));
    const double a_add = pref * std::pow(0.5 * kappa, -P) / specfun::gamma(1.0 - P);
    const double a_st = -pref * std::pow(0.5 * kappa, P) / specfun::gamma(1.0 + P);
    return {a_st, a_add};
}

OracleState inverse_square_state(double P, double kappa, double m, int l, const GridSpec& spec)
{
    if (!(P > 0.0 && P < 0.5) || !(kappa > 0.0) || !(m > 0.0) || l < 0) {
        throw Error(ErrorKind::Precondition, "inverse-square state needs 0 < P < 1/2, kappa > 0, m > 0");
    }
    const double half = l + 0.5;
    const double V0 = (half * half - P * P) / (2.0 * m);
    const RadialProblem problem{EquationKind::schroedinger(m), PotentialSpec::inverse_square(V0), l};
    const double E = -kappa * kappa / (2.0 * m);
    const double N = kp_normalization(P, kappa);
    const auto [a_st, a_add] = kp_coefficients(P, kappa);
    return finish(
        problem, BoundaryCondition::singular(P, a_add / a_st), E, spec,
        [=](double r) { return kp_jet(P, kappa, N, r).v; }, [=](double r) { return kp_jet(P, kappa, N, r).d1; },
        [=](double r) { return kp_jet(P, kappa, N, r).d2; }, "inverse_square_kp", a_st, a_add);
}

double massless_kg_alpha(double P, int l)
{
    const double half = l + 0.5;
    return 2.0 * std::sqrt(half * half - P * P);
}

OracleState massless_kg_state(double P, double m, int l, CoulombSign sign, const GridSpec& spec)
{
    if (!(P > 0.0 && P < 0.5) || !(m > 0.0) || l < 0) {
        throw Error(ErrorKind::Precondition, "massless state needs 0 < P < 1/2 and m > 0");
    }
    const RadialProblem problem{EquationKind::kg_two_body(m), PotentialSpec::coulomb(massless_kg_alpha(P, l), sign),
                                l};
    const double N = kp_normalization(P, m);
    const auto [a_st, a_add] = kp_coefficients(P, m);
    return finish(
        problem, BoundaryCondition::singular(P, a_add / a_st), 0.0, spec,
        [=](double r) { return kp_jet(P, m, N, r).v; }, [=](double r) { return kp_jet(P, m, N, r).d1; },
        [=](double r) { return kp_jet(P, m, N, r).d2; }, "massless_kg_kp", a_st, a_add);
}

double kg_one_body_coulomb_level(int nr, int l, double m, double alpha)
{
    const double half = l + 0.5;
    const double rad = half * half - alpha * alpha;
    if (rad < 0.0) {
        throw Error(ErrorKind::Supercritical, "one-body KG Coulomb coupling is supercritical");
    }
    const double N = nr + 0.5 + std::sqrt(rad);
    return m / std::sqrt(1.0 + alpha * alpha / (N * N));
}

double kg_two_body_coulomb_level(int nr, int l, double m, double alpha)
{
    const double half = l + 0.5;
    const double rad = half * half - 0.25 * alpha * alpha;
    if (rad < 0.0) {
        throw Error(ErrorKind::Supercritical, "two-body KG Coulomb coupling is supercritical");
    }
    const double N = nr + 0.5 + std::sqrt(rad);
    return 2.0 * m / std::sqrt(1.0 + alpha * alpha / (4.0 * N * N));
}

} // namespace hvl
