#pragma once

namespace hvl::specfun {

/// Truncation control for the power series below.
struct SeriesControl {
    int max_terms = 200;
    double rel_tol = 1e-14;

    void validate() const;
};

/// Argument where I and K switch from their convergent forms to the large-z
/// asymptotic expansions.
inline constexpr double kAsymptoticCrossover = 30.0;

/// Gamma function, Lanczos approximation (g = 7, nine coefficients) with the
/// reflection formula below x = 1/2. Relative accuracy is about 1e-15.
/// Throws Domain at the poles x = 0, -1, -2, ...
double gamma(double x);

/// Modified Bessel function of the first kind I_nu(z), z >= 0.
/// Ascending series up to z = 30, asymptotic expansion beyond.
double bessel_i(double nu, double z, const SeriesControl& control = {});

/// Modified Bessel function of the second kind K_nu(z) for non-integer nu and
/// z > 0. For z <= 2 it is the reflection combination
///     K_nu = pi / (2 sin(nu pi)) [I_{-nu} - I_nu];
/// between 2 and 30 that combination loses ~2z/ln(10) digits to cancellation,
/// so Steed's continued fraction (Temme's form) is used instead; beyond 30 the
/// asymptotic expansion takes over.
double bessel_k(double nu, double z, const SeriesControl& control = {});

} // namespace hvl::specfun
