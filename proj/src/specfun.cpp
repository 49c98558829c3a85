#include "hvl/specfun.hpp"

#include "hvl/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace hvl::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

// Boundary between the reflection formula and the continued fraction for K.
constexpr double kReflectionLimit = 2.0;

bool is_integer(double x) { return x == std::nearbyint(x); }

double lanczos_gamma(double x)
{
    static constexpr std::array<double, 9> c = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    constexpr double g = 7.0;
    x -= 1.0;
    double a = c[0];
    const double t = x + g + 0.5;
    for (int i = 1; i < 9; ++i) {
        a += c[i] / (x + i);
    }
    return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double bessel_i_series(double nu, double z, const SeriesControl& control)
{
    const double half = 0.5 * z;
    double term = std::pow(half, nu) / gamma(nu + 1.0);
    double sum = term;
    const double q = half * half;
    for (int k = 0; k < control.max_terms; ++k) {
        term *= q / ((k + 1.0) * (nu + k + 1.0));
        sum += term;
        if (std::abs(term) <= control.rel_tol * std::abs(sum) && k > 2) {
            return sum;
        }
    }
    throw Error(ErrorKind::Range, "bessel_i series did not converge within max_terms");
}

// Sum of prod_{j<=k} (4nu^2 - (2j-1)^2) / (k! (8z)^k) * sign^k, stopped at the
// smallest term.
double hankel_sum(double nu, double z, double sign, const SeriesControl& control)
{
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double previous = std::abs(term);
    for (int k = 1; k < control.max_terms; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= sign * (mu - odd * odd) / (8.0 * k * z);
        if (std::abs(term) > previous) {
            break;
        }
        sum += term;
        previous = std::abs(term);
        if (std::abs(term) <= control.rel_tol * std::abs(sum)) {
            break;
        }
    }
    return sum;
}

// Steed's CF2 in Temme's normalization. Returns {K_mu, K_{mu+1}} for
// |mu| <= 1/2, z >= 2.
std::array<double, 2> bessel_k_steed(double mu, double z, const SeriesControl& control)
{
    const double mu2 = mu * mu;
    double b = 2.0 * (1.0 + z);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    bool converged = false;
    for (int i = 1; i < 10 * control.max_terms; ++i) {
        a -= 2 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < control.rel_tol * 0.1) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw Error(ErrorKind::Range, "bessel_k continued fraction did not converge");
    }
    h = a1 * h;
    const double kmu = std::sqrt(kPi / (2.0 * z)) * std::exp(-z) / s;
    const double kmu1 = kmu * (mu + z + 0.5 - h) / z;
    return {kmu, kmu1};
}

} // namespace

void SeriesControl::validate() const
{
    if (!(rel_tol > 0.0) || max_terms < 10) {
        throw Error(ErrorKind::Domain, "SeriesControl requires rel_tol > 0 and max_terms >= 10");
    }
}

double gamma(double x)
{
    if (!std::isfinite(x)) {
        throw Error(ErrorKind::Domain, "gamma: non-finite argument");
    }
    if (x <= 0.0 && is_integer(x)) {
        throw Error(ErrorKind::Domain, "gamma: pole at non-positive integer " + std::to_string(x));
    }
    if (x < 0.5) {
        return kPi / (std::sin(kPi * x) * lanczos_gamma(1.0 - x));
    }
    if (x > 171.6) {
        throw Error(ErrorKind::Range, "gamma: overflow");
    }
    return lanczos_gamma(x);
}

double bessel_i(double nu, double z, const SeriesControl& control)
{
    control.validate();
    if (!(z >= 0.0) || !std::isfinite(nu)) {
        throw Error(ErrorKind::Domain, "bessel_i requires z >= 0 and finite order");
    }
    if (nu < 0.0 && is_integer(nu)) {
        nu = -nu; // I_{-n} = I_n
    }
    if (z == 0.0) {
        if (nu == 0.0) {
            return 1.0;
        }
        if (nu > 0.0) {
            return 0.0;
        }
        throw Error(ErrorKind::Range, "bessel_i: negative non-integer order diverges at z = 0");
    }
    if (z <= kAsymptoticCrossover) {
        return bessel_i_series(nu, z, control);
    }
    if (z > 700.0) {
        throw Error(ErrorKind::Range, "bessel_i: overflow");
    }
    return std::exp(z) / std::sqrt(2.0 * kPi * z) * hankel_sum(nu, z, -1.0, control);
}

double bessel_k(double nu, double z, const SeriesControl& control)
{
    control.validate();
    if (!std::isfinite(nu) || is_integer(nu)) {
        throw Error(ErrorKind::Domain, "bessel_k: integer order is not supported");
    }
    if (!(z > 0.0)) {
        throw Error(ErrorKind::Domain, "bessel_k requires z > 0");
    }
    nu = std::abs(nu); // K is even in its order
    if (z <= kReflectionLimit) {
        return kPi / (2.0 * std::sin(nu * kPi)) *
               (bessel_i(-nu, z, control) - bessel_i(nu, z, control));
    }
    if (z > kAsymptoticCrossover) {
        if (z > 700.0) {
            return 0.0;
        }
        return std::sqrt(kPi / (2.0 * z)) * std::exp(-z) * hankel_sum(nu, z, 1.0, control);
    }
    const int shift = static_cast<int>(std::nearbyint(nu));
    const double mu = nu - shift;
    auto [k_lo, k_hi] = bessel_k_steed(mu, z, control);
    // K_{v+1} = (2v/z) K_v + K_{v-1}
    double v = mu + 1.0;
    for (int i = 1; i < shift; ++i) {
        const double next = 2.0 * v / z * k_hi + k_lo;
        k_lo = k_hi;
        k_hi = next;
        v += 1.0;
    }
    return shift == 0 ? k_lo : k_hi;
}

} // namespace hvl::specfun
