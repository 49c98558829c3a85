#include "hvl/series.hpp"

#include "hvl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace hvl {

namespace {

constexpr double kCancelTol = 1e-13;

bool same_exponent(double a, double b) { return std::abs(a - b) <= PowerLogSeries::kExponentTol; }

// Integral over (0, upper] of r^e ln^k r, e > -1.
double monomial_integral(double e, int k, double upper)
{
    const double ep1 = e + 1.0;
    const double head = std::pow(upper, ep1) / ep1;
    if (k == 0) {
        return head;
    }
    const double lr = std::log(upper);
    return head * std::pow(lr, k) - (k / ep1) * monomial_integral(e, k - 1, upper);
}

} // namespace

PowerLogSeries::PowerLogSeries(std::initializer_list<SeriesTerm> terms)
{
    normalize(std::vector<SeriesTerm>(terms));
}

PowerLogSeries::PowerLogSeries(std::vector<SeriesTerm> terms) { normalize(std::move(terms)); }

PowerLogSeries PowerLogSeries::constant(double c) { return PowerLogSeries{{c, 0.0, 0}}; }

PowerLogSeries PowerLogSeries::monomial(double coef, double exponent, int log_power)
{
    return PowerLogSeries{{coef, exponent, log_power}};
}

void PowerLogSeries::normalize(std::vector<SeriesTerm> raw)
{
    std::stable_sort(raw.begin(), raw.end(),
                     [](const SeriesTerm& a, const SeriesTerm& b) { return a.exponent < b.exponent; });
    terms_.clear();
    std::size_t i = 0;
    while (i < raw.size()) {
        const double e0 = raw[i].exponent;
        // sum and absolute sum per log power inside one exponent cluster
        std::map<int, std::pair<double, double>> acc;
        while (i < raw.size() && same_exponent(raw[i].exponent, e0)) {
            auto& [sum, mag] = acc[raw[i].log_power];
            sum += raw[i].coef;
            mag += std::abs(raw[i].coef);
            ++i;
        }
        for (const auto& [k, sm] : acc) {
            const auto [sum, mag] = sm;
            if (sum == 0.0 || std::abs(sum) <= kCancelTol * mag) {
                continue;
            }
            terms_.push_back({sum, e0, k});
        }
    }
}

double PowerLogSeries::operator()(double r) const
{
    double total = 0.0;
    const double lr = std::log(r);
    for (const auto& t : terms_) {
        double v = t.coef * (t.exponent == 0.0 ? 1.0 : std::pow(r, t.exponent));
        for (int k = 0; k < t.log_power; ++k) {
            v *= lr;
        }
        total += v;
    }
    return total;
}

PowerLogSeries PowerLogSeries::derivative() const
{
    // d/dr r^e ln^k r = e r^{e-1} ln^k r + k r^{e-1} ln^{k-1} r
    std::vector<SeriesTerm> out;
    out.reserve(2 * terms_.size());
    for (const auto& t : terms_) {
        if (t.exponent != 0.0) {
            out.push_back({t.coef * t.exponent, t.exponent - 1.0, t.log_power});
        }
        if (t.log_power > 0) {
            out.push_back({t.coef * t.log_power, t.exponent - 1.0, t.log_power - 1});
        }
    }
    return PowerLogSeries(std::move(out));
}

PowerLogSeries PowerLogSeries::shifted(double shift) const
{
    std::vector<SeriesTerm> out = terms_;
    for (auto& t : out) {
        t.exponent += shift;
    }
    return PowerLogSeries(std::move(out));
}

PowerLogSeries PowerLogSeries::truncated(double max_exponent) const
{
    std::vector<SeriesTerm> out;
    for (const auto& t : terms_) {
        if (t.exponent <= max_exponent + kExponentTol) {
            out.push_back(t);
        }
    }
    return PowerLogSeries(std::move(out));
}

double PowerLogSeries::coefficient(double exponent, int log_power) const
{
    for (const auto& t : terms_) {
        if (same_exponent(t.exponent, exponent) && t.log_power == log_power) {
            return t.coef;
        }
    }
    return 0.0;
}

double PowerLogSeries::min_exponent() const noexcept
{
    return terms_.empty() ? std::numeric_limits<double>::infinity() : terms_.front().exponent;
}

std::optional<double> PowerLogSeries::limit_at_zero() const
{
    double value = 0.0;
    for (const auto& t : terms_) {
        if (t.exponent < -kExponentTol) {
            return std::nullopt;
        }
        if (same_exponent(t.exponent, 0.0)) {
            if (t.log_power > 0) {
                return std::nullopt;
            }
            value += t.coef;
        }
    }
    return value;
}

bool PowerLogSeries::integrable_at_zero() const
{
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const SeriesTerm& t) { return t.exponent > -1.0 + kExponentTol; });
}

double PowerLogSeries::integral_from_zero(double upper) const
{
    if (!integrable_at_zero()) {
        throw Error(ErrorKind::Divergence, "integrand is not integrable at r = 0");
    }
    double total = 0.0;
    for (const auto& t : terms_) {
        total += t.coef * monomial_integral(t.exponent, t.log_power, upper);
    }
    return total;
}

PowerLogSeries& PowerLogSeries::operator+=(const PowerLogSeries& other)
{
    std::vector<SeriesTerm> raw = terms_;
    raw.insert(raw.end(), other.terms_.begin(), other.terms_.end());
    normalize(std::move(raw));
    return *this;
}

PowerLogSeries& PowerLogSeries::operator-=(const PowerLogSeries& other)
{
    std::vector<SeriesTerm> raw = terms_;
    for (auto t : other.terms_) {
        t.coef = -t.coef;
        raw.push_back(t);
    }
    normalize(std::move(raw));
    return *this;
}

PowerLogSeries& PowerLogSeries::operator*=(double s)
{
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) {
        t.coef *= s;
    }
    return *this;
}

PowerLogSeries operator*(const PowerLogSeries& a, const PowerLogSeries& b)
{
    std::vector<SeriesTerm> raw;
    raw.reserve(a.terms().size() * b.terms().size());
    for (const auto& x : a.terms()) {
        for (const auto& y : b.terms()) {
            raw.push_back({x.coef * y.coef, x.exponent + y.exponent, x.log_power + y.log_power});
        }
    }
    return PowerLogSeries(std::move(raw));
}

} // namespace hvl
