#pragma once

#include "hvl/series.hpp"

#include <array>
#include <string>
#include <vector>

namespace hvl {

enum class CoulombSign { Attractive, Repulsive };

/// Central potential V(r). Every kind is an exact PowerLogSeries, so values,
/// derivatives and small-r limits come from the same symbolic form.
///
///   Coulomb        V = -alpha/r (attractive) or +alpha/r (repulsive)
///   PowerLaw       V = V0 r^n
///   InverseSquare  V = -V0/r^2, V0 > 0
///   Sum            sum of the listed terms
struct PotentialSpec {
    enum class Kind { Coulomb, PowerLaw, InverseSquare, Sum };

    Kind kind = Kind::Sum;
    double alpha = 0.0;
    CoulombSign sign = CoulombSign::Attractive;
    double V0 = 0.0;
    double n = 0.0;
    std::vector<PotentialSpec> terms;

    static PotentialSpec coulomb(double alpha, CoulombSign sign = CoulombSign::Attractive);
    static PotentialSpec power_law(double V0, double n);
    static PotentialSpec inverse_square(double V0);
    static PotentialSpec sum(std::vector<PotentialSpec> terms);

    /// Throws Classification on malformed metadata.
    void validate() const;

    PowerLogSeries series() const;
    double value(double r) const;
    double derivative(double r) const;

    /// Flattened list of leaf terms (Sum nodes expanded, depth first).
    std::vector<PotentialSpec> leaves() const;

    std::string describe() const;
};

struct EquationKind {
    enum class Type { Schroedinger, KleinGordonOneBody, KleinGordonTwoBody };

    Type type = Type::Schroedinger;
    double m = 1.0;

    static EquationKind schroedinger(double m) { return {Type::Schroedinger, m}; }
    static EquationKind kg_one_body(double m) { return {Type::KleinGordonOneBody, m}; }
    static EquationKind kg_two_body(double m) { return {Type::KleinGordonTwoBody, m}; }
};

std::string to_string(EquationKind::Type type);

struct RadialProblem {
    EquationKind equation;
    PotentialSpec potential;
    int l = 0;

    void validate() const;
    /// "E" or "M".
    const char* eigenparameter_name() const;
};

/// A(r; eps) = A0(r) + eps A1(r) + eps^2 A2(r), eps the eigenparameter.
///
///   Schroedinger  A = 2m(E - V)
///   KG one-body   A = (E - V)^2 - m^2
///   KG two-body   A = V^2/4 - MV/2 + M^2/4 - m^2
std::array<PowerLogSeries, 3> coefficient_polynomial(const RadialProblem& problem);

/// A(r) and A'(r) at a fixed eigenparameter.
class EffectiveCoefficient {
public:
    EffectiveCoefficient() = default;
    EffectiveCoefficient(PowerLogSeries a, double eigenparameter);

    double operator()(double r) const { return a_(r); }
    double derivative(double r) const { return da_(r); }

    const PowerLogSeries& series() const noexcept { return a_; }
    const PowerLogSeries& derivative_series() const noexcept { return da_; }
    double eigenparameter() const noexcept { return eps_; }

    /// L = A - l(l+1)/r^2.
    PowerLogSeries with_centrifugal(int l) const;

private:
    PowerLogSeries a_;
    PowerLogSeries da_;
    double eps_ = 0.0;
};

EffectiveCoefficient build_effective_coefficient(const RadialProblem& problem, double eigenparameter);

struct SingularityClass {
    enum class Kind { Regular, Singular, SingularLog, StandardOnly, Supercritical };

    Kind kind = Kind::Regular;
    /// c = lim r^2 A(r). Zero for Regular.
    double c = 0.0;
    /// (l + 1/2)^2 - c.
    double radicand = 0.25;
    /// sqrt(radicand); l + 1/2 for Regular, 0 for SingularLog, NaN for Supercritical.
    double P = 0.5;

    bool singular() const noexcept
    {
        return kind == Kind::Singular || kind == Kind::SingularLog || kind == Kind::StandardOnly;
    }
};

std::string to_string(SingularityClass::Kind kind);

/// Tolerance below which |radicand| is treated as exactly zero.
inline constexpr double kLogRadicandTol = 1e-14;

/// Symbolic classification from the r^-2 coefficient of A. Throws
/// Classification when A has terms more singular than r^-2, or when the
/// r^-2 coefficient depends on the eigenparameter.
SingularityClass classify_singularity(const RadialProblem& problem);

/// Limit of V at r -> infinity: +inf for confining potentials.
double potential_at_infinity(const PotentialSpec& potential);

} // namespace hvl
