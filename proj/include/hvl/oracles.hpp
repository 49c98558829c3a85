#pragma once

#include "hvl/grid.hpp"
#include "hvl/state.hpp"

#include <functional>

namespace hvl {

/// Closed-form state on the solver's grid type. radial, radial_d1, radial_d2
/// are the analytic R, R', R''.
struct OracleState : Eigenstate {
    std::function<double(double)> radial;
    std::function<double(double)> radial_d1;
    std::function<double(double)> radial_d2;
};

/// Generalized Laguerre polynomial L_n^alpha(x) by the three-term recurrence.
double laguerre(int n, double alpha, double x);

/// Hydrogen-like state of V = -alpha/r: E = -m alpha^2 / (2 n^2).
OracleState hydrogen_state(int n, int l, double m, double alpha, const GridSpec& spec = {});

/// Isotropic oscillator V = m omega^2 r^2 / 2: E = omega (2 nr + l + 3/2).
OracleState oscillator_state(int nr, int l, double m, double omega, const GridSpec& spec = {});

/// Single level of V = -V0/r^2 under the SAE with decay constant kappa:
/// R = N r^{-1/2} K_P(kappa r), E = -kappa^2 / (2m),
/// V0 = ((l + 1/2)^2 - P^2) / (2m). a_st, a_add are exact.
OracleState inverse_square_state(double P, double kappa, double m, int l = 0, const GridSpec& spec = {});

/// Massless two-body Klein-Gordon state for Coulomb coupling
/// alpha = 2 sqrt((l+1/2)^2 - P^2): R = N r^{-1/2} K_P(m r), M = 0.
OracleState massless_kg_state(double P, double m, int l = 0, CoulombSign sign = CoulombSign::Attractive,
                              const GridSpec& spec = {});

/// Unit-norm constant of r^{-1/2} K_P(kappa r): N^2 = 2 kappa^2 sin(pi P) / (pi P).
double kp_normalization(double P, double kappa);

/// Exact (a_st, a_add) of the unit-normalized K_P state.
std::pair<double, double> kp_coefficients(double P, double kappa);

/// Coulomb coupling that gives singularity index P in the two-body KG equation.
double massless_kg_alpha(double P, int l = 0);

/// Independent closed-form levels.
double kg_one_body_coulomb_level(int nr, int l, double m, double alpha);
double kg_two_body_coulomb_level(int nr, int l, double m, double alpha);

} // namespace hvl
