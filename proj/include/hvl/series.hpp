#pragma once

#include <initializer_list>
#include <optional>
#include <vector>

namespace hvl {

/// One term coef * r^exponent * ln(r)^log_power.
struct SeriesTerm {
    double coef = 0.0;
    double exponent = 0.0;
    int log_power = 0;
};

/// Finite sum of generalized monomials r^e ln^k r.
///
/// Potentials built from Coulomb, power-law and inverse-square pieces are exact
/// finite sums of this form, and so are the effective coefficients of all three
/// equations. The same algebra carries the local (Frobenius) expansions of the
/// radial function near the origin, which is what makes origin limits and the
/// [0, r_min] quadrature tails exact rather than extrapolated.
///
/// Terms are kept sorted by (exponent, log_power). Like terms are merged and
/// dropped when they cancel to within 1e-13 of their combined magnitude.
class PowerLogSeries {
public:
    static constexpr double kExponentTol = 1e-9;

    PowerLogSeries() = default;
    PowerLogSeries(std::initializer_list<SeriesTerm> terms);
    explicit PowerLogSeries(std::vector<SeriesTerm> terms);

    static PowerLogSeries constant(double c);
    static PowerLogSeries monomial(double coef, double exponent, int log_power = 0);

    const std::vector<SeriesTerm>& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }

    double operator()(double r) const;
    PowerLogSeries derivative() const;

    /// Multiplies by r^shift.
    PowerLogSeries shifted(double shift) const;
    /// Keeps terms with exponent <= max_exponent (relative to nothing; absolute).
    PowerLogSeries truncated(double max_exponent) const;

    /// Coefficient of r^exponent ln^log_power r, zero when absent.
    double coefficient(double exponent, int log_power = 0) const;
    /// Smallest exponent present; +inf for the empty series.
    double min_exponent() const noexcept;

    /// lim_{r->0}; nullopt when the limit diverges.
    std::optional<double> limit_at_zero() const;
    /// True when every term is integrable on (0, r].
    bool integrable_at_zero() const;
    /// Exact integral over (0, upper]. Throws Divergence when not integrable.
    double integral_from_zero(double upper) const;

    PowerLogSeries& operator+=(const PowerLogSeries& other);
    PowerLogSeries& operator-=(const PowerLogSeries& other);
    PowerLogSeries& operator*=(double s);

    friend PowerLogSeries operator+(PowerLogSeries a, const PowerLogSeries& b) { return a += b; }
    friend PowerLogSeries operator-(PowerLogSeries a, const PowerLogSeries& b) { return a -= b; }
    friend PowerLogSeries operator*(PowerLogSeries a, double s) { return a *= s; }
    friend PowerLogSeries operator*(double s, PowerLogSeries a) { return a *= s; }
    friend PowerLogSeries operator*(const PowerLogSeries& a, const PowerLogSeries& b);
    PowerLogSeries operator-() const { return *this * -1.0; }

private:
    void normalize(std::vector<SeriesTerm> raw);

    std::vector<SeriesTerm> terms_;
};

} // namespace hvl
