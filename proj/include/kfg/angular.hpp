#pragma once

#include "kfg/potential.hpp"

namespace kfg {

/// Closed-form solution of the polar-angle equation for one (m, N, E).
struct AngularSolution
{
    double gamma{0.0}; ///< 2 (E + M)
    double u{0.0};     ///< sqrt((m^2 + gamma beta')^2 - gamma^2 beta^2)
    double zeta{0.0};  ///< sqrt((m^2 + gamma beta' + u) / 2)
    double B{0.0};     ///< equal to zeta
    double C{0.0};     ///< sqrt((m^2 + gamma beta' - u) / 2)
    double lambda{0.0};
    double l_eff{0.0}; ///< N + zeta
    double norm{0.0};  ///< normalization constant of Theta_N
    int N{0};
    int m{0};
};

/// Throws InfeasibleRing when m^2 < gamma (beta - beta'), i.e. when u would be imaginary.
AngularSolution solve_angular(const PotentialSpec& spec, double E, int m, int N);

/// Theta_N(theta) = C_N (1-z)^{(B+C)/2} (1+z)^{(B-C)/2} P_N^{(B+C, B-C)}(z), z = cos theta,
/// with C_N recomputed for the requested degree.
double theta_wavefunction(const AngularSolution& sol, int N, double theta);

/// Unit-norm constant of Theta_N with respect to sin(theta) d(theta).
double angular_norm(double B, double C, int N);

} // namespace kfg
