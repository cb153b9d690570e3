#include "kfg/angular.hpp"

#include <cmath>
#include <numbers>

#include "kfg/errors.hpp"
#include "kfg/special_functions.hpp"

namespace kfg {

AngularSolution solve_angular(const PotentialSpec& spec, double E, int m, int N)
{
    if (N < 0) {
        raise(ErrorKind::Domain, "angular degree N must be nonnegative");
    }
    AngularSolution sol;
    sol.N = N;
    sol.m = m;
    sol.gamma = 2.0 * (E + spec.M);
    const double w = double(m) * m + sol.gamma * spec.beta_prime;
    const double disc = w * w - sol.gamma * sol.gamma * spec.beta * spec.beta;
    if (disc < 0.0 || w < 0.0) {
        raise(ErrorKind::InfeasibleRing, "m^2 < gamma (beta - beta'): no real angular solution");
    }
    sol.u = std::sqrt(disc);
    sol.zeta = std::sqrt(0.5 * (w + sol.u));
    sol.B = sol.zeta;
    sol.C = std::sqrt(std::max(0.0, 0.5 * (w - sol.u)));
    if (sol.B - sol.C <= -1.0) {
        raise(ErrorKind::Domain, "Jacobi parameters B +- C must exceed -1");
    }
    sol.l_eff = N + sol.zeta;
    sol.lambda = sol.l_eff * (sol.l_eff + 1.0);
    sol.norm = angular_norm(sol.B, sol.C, N);
    return sol;
}

double angular_norm(double B, double C, int N)
{
    const double a1 = N + B + C + 1.0;
    const double a2 = N + B - C + 1.0;
    const double a3 = N + 2.0 * B + 1.0;
    if (N < 0 || !(a1 > 0.0) || !(a2 > 0.0) || !(a3 > 0.0)) {
        raise(ErrorKind::Domain, "angular normalization hits a gamma-function pole");
    }
    const double log_sq = std::log(2.0 * N + 2.0 * B + 1.0) + log_gamma(N + 1.0) + log_gamma(a3) -
                          (2.0 * B + 1.0) * std::numbers::ln2 - log_gamma(a1) - log_gamma(a2);
    return std::exp(0.5 * log_sq);
}

double theta_wavefunction(const AngularSolution& sol, int N, double theta)
{
    const double z = std::cos(theta);
    const double sh = std::sin(0.5 * theta), ch = std::cos(0.5 * theta);
    const double one_minus_z = 2.0 * sh * sh;
    const double one_plus_z = 2.0 * ch * ch;
    const double a = sol.B + sol.C;
    const double b = sol.B - sol.C;
    if ((one_minus_z <= 0.0 && a < 0.0) || (one_plus_z <= 0.0 && b < 0.0)) {
        raise(ErrorKind::Domain, "angular wavefunction singular at the pole");
    }
    return angular_norm(sol.B, sol.C, N) * std::pow(one_minus_z, 0.5 * a) * std::pow(one_plus_z, 0.5 * b) *
           jacobi_poly(N, a, b, z);
}

} // namespace kfg
