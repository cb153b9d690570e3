#include "kfg/nu_radial.hpp"

#include <cmath>

#include "kfg/errors.hpp"
#include "kfg/special_functions.hpp"

namespace kfg {

NuParameters nu_parameters(const PotentialSpec& spec, double E, double lambda)
{
    if (!(std::abs(E) < spec.M)) {
        raise(ErrorKind::NotBound, "bound states need |E| < M");
    }
    const double d2 = spec.delta * spec.delta;
    NuParameters p;
    p.lambda = lambda;
    p.eps = std::sqrt(spec.M * spec.M - E * E) / spec.delta;
    p.alpha_sq = (2.0 * E * spec.V0 + 2.0 * spec.M * spec.S0) / d2;
    p.beta_sq = (spec.S0 * spec.S0 - spec.V0 * spec.V0) / d2;
    p.alpha_prime_sq = 2.0 * spec.V0 * (E - spec.M) / d2;
    const double centre = 0.25 + p.beta_sq + lambda;
    if (centre < 0.0) {
        raise(ErrorKind::UnsupportedRegime, "1/4 + beta^2 + lambda < 0 gives a complex exponent K");
    }
    const double eps2 = p.eps * p.eps;
    p.a = 0.25 + eps2 + p.alpha_sq + p.beta_sq + lambda * spec.C0;
    p.b = 2.0 * eps2 + 2.0 * lambda * spec.C0 + p.alpha_sq - lambda;
    p.c = eps2 + lambda * spec.C0;
    p.sqrt_c = std::sqrt(p.c);
    p.K = 0.5 + std::sqrt(centre);
    return p;
}

double nu_bracket(const NuParameters& p, int n_r)
{
    const double n = n_r;
    const double root = std::sqrt(0.25 + p.beta_sq + p.lambda);
    return (p.alpha_sq - p.lambda - 0.5 - n * (n + 1.0) - (2.0 * n + 1.0) * root) / (2.0 * n + 1.0 + 2.0 * root);
}

double energy_rhs_general(const PotentialSpec& spec, double E, int n_r, double lambda)
{
    const NuParameters p = nu_parameters(spec, E, lambda);
    const double br = nu_bracket(p, n_r) * spec.delta;
    return br * br - lambda * spec.C0 * spec.delta * spec.delta;
}

double energy_rhs(const PotentialSpec& spec, double E, int n_r, double lambda, CouplingCase c)
{
    if (c == CouplingCase::VneqS) {
        return energy_rhs_general(spec, E, n_r, lambda);
    }
    if (!(std::abs(E) < spec.M)) {
        raise(ErrorKind::NotBound, "bound states need |E| < M");
    }
    if (lambda < -0.25) {
        raise(ErrorKind::UnsupportedRegime, "lambda < -1/4 gives a complex orbital number");
    }
    const double d2 = spec.delta * spec.delta;
    const double coupling = c == CouplingCase::VeqS ? 2.0 * spec.V0 * (E + spec.M) / d2   // alpha^2
                                                     : 2.0 * spec.V0 * (E - spec.M) / d2; // alpha'^2
    const double l = -0.5 + std::sqrt(0.25 + lambda);
    const double L = n_r + l + 1.0;
    const double br = coupling / (2.0 * L) - 0.5 * L;
    return br * br * d2 - lambda * spec.C0 * d2;
}

double energy_residual(const PotentialSpec& spec, double E, int n_r, double lambda, CouplingCase c)
{
    return (spec.M * spec.M - E * E) - energy_rhs(spec, E, n_r, lambda, c);
}

double nu_quantization_defect(const NuParameters& p, int n_r)
{
    const double n = n_r;
    const double root_cab = std::sqrt(std::max(0.0, p.c + p.a - p.b));
    const double lambda_bar =
        p.b - 2.0 * p.c - 2.0 * std::sqrt(std::max(0.0, p.c * p.c + p.c * (p.a - p.b))) - (0.5 + p.sqrt_c + root_cab);
    const double lambda_bar_n = 2.0 * n * (1.0 + p.sqrt_c + root_cab) + n * (n - 1.0);
    return lambda_bar - lambda_bar_n;
}

std::vector<EnergyLevel> solve_energies(const PotentialSpec& spec, int n_r, double lambda, CouplingCase c,
                                        int scan_points)
{
    if (scan_points < 16) {
        raise(ErrorKind::Domain, "solve_energies needs at least 16 scan points");
    }
    if (n_r < 0) {
        raise(ErrorKind::Domain, "n_r must be nonnegative");
    }
    const PotentialSpec eff = with_coupling(spec, c);
    // propagate UnsupportedRegime before scanning
    nu_parameters(eff, 0.0, lambda);

    const double edge = spec.M * (1.0 - 1e-6);
    auto g = [&](double E) { return energy_residual(eff, E, n_r, lambda, c); };
    std::vector<EnergyLevel> levels;
    for (double E : bracket_roots(g, -edge, edge, scan_points, 1e-12)) {
        EnergyLevel lv;
        lv.E = E;
        lv.qn = QuantumNumbers{n_r, 0, 0};
        lv.lambda = lambda;
        lv.coupling = c;
        lv.route = Route::NU;
        lv.residual = g(E);
        const NuParameters p = nu_parameters(eff, E, lambda);
        const double br = nu_bracket(p, n_r);
        lv.spurious = !(br > 0.0);
        // existence condition: lambda C0 must not exceed the bracket squared
        const bool radial_ok = !(lambda * spec.C0 > br * br);
        lv.bound = !lv.spurious && radial_ok && (spec.M * spec.M - E * E) > 0.0;
        levels.push_back(lv);
    }
    return levels;
}

double radial_norm(double sqrt_c, double K, int n_r, double delta)
{
    if (!(sqrt_c > 0.0) || !(K > 0.0) || n_r < 0 || !(delta > 0.0)) {
        raise(ErrorKind::Domain, "radial_norm needs positive sqrt(c), K, delta and n_r >= 0");
    }
    const double n = n_r;
    const double log_sq = std::log(delta) + log_gamma(n + 1.0) + std::log(2.0 * sqrt_c) +
                          std::log(n + K + sqrt_c) + log_gamma(2.0 * (K + sqrt_c) + n) - std::log(n + K) -
                          log_gamma(n + 2.0 * sqrt_c + 1.0) - log_gamma(n + 2.0 * K);
    return std::exp(0.5 * log_sq);
}

namespace {

double chi_unnormalized(double r, int n_r, double sqrt_c, double K, double delta)
{
    const double s = std::exp(-delta * r);
    const double one_minus_s = -std::expm1(-delta * r);
    return std::pow(s, sqrt_c) * std::pow(one_minus_s, K) * jacobi_poly(n_r, 2.0 * sqrt_c, 2.0 * K - 1.0, 1.0 - 2.0 * s);
}

double chi_squared_integral(int n_r, double sqrt_c, double K, double delta, double scale)
{
    // tail beyond r_end is below e^{-80} relative
    const double r_end = (40.0 + 4.0 * n_r) / (delta * sqrt_c) + 10.0 / delta;
    auto f = [&](double r) {
        const double v = scale * chi_unnormalized(r, n_r, sqrt_c, K, delta);
        return v * v;
    };
    return integrate(f, 0.0, r_end, 20, 1e-13);
}

} // namespace

RadialEigenfunction::RadialEigenfunction(const PotentialSpec& spec, const EnergyLevel& level, int n_r, double lambda)
    : n_r_(n_r)
    , delta_(spec.delta)
    , E_(level.E)
{
    const NuParameters p = nu_parameters(with_coupling(spec, level.coupling), level.E, lambda);
    if (level.spurious || !(nu_bracket(p, n_r) > 0.0)) {
        raise(ErrorKind::NotBound, "no normalizable radial eigenfunction at a spurious root");
    }
    sqrt_c_ = p.sqrt_c;
    K_ = p.K;
    norm_ = radial_norm(sqrt_c_, K_, n_r_, delta_);
    norm_check_ = chi_squared_integral(n_r_, sqrt_c_, K_, delta_, norm_);
    if (std::abs(norm_check_ - 1.0) > 1e-6) {
        // closed form disagrees with quadrature; trust the measured norm
        norm_ /= std::sqrt(norm_check_);
    }
}

double RadialEigenfunction::operator()(double r) const
{
    if (!(r > 0.0)) {
        raise(ErrorKind::Domain, "radius must be positive");
    }
    return norm_ * chi_unnormalized(r, n_r_, sqrt_c_, K_, delta_);
}

double radial_norm_integral(const RadialEigenfunction& chi)
{
    return chi_squared_integral(chi.n_r(), chi.sqrt_c(), chi.K(), chi.delta(), chi.norm());
}

double radial_wavefunction(const PotentialSpec& spec, const EnergyLevel& level, int n_r, double lambda, double r)
{
    return RadialEigenfunction(spec, level, n_r, lambda)(r);
}

} // namespace kfg
