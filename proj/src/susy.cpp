#include "kfg/susy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "kfg/errors.hpp"
#include "kfg/nu_radial.hpp"
#include "kfg/special_functions.hpp"

namespace kfg {

double susy_c_of_d(double D, double coupling_sum)
{
    if (D == 0.0) {
        raise(ErrorKind::Domain, "superpotential constant D vanishes");
    }
    return 0.5 * D - coupling_sum / (2.0 * D);
}

SusyFactorization factorize(const PotentialSpec& spec, double E, double lambda)
{
    if (!(std::abs(E) < spec.M)) {
        raise(ErrorKind::NotBound, "bound states need |E| < M");
    }
    const double d = spec.delta;
    const double d2 = d * d;
    const double alpha_d2 = 2.0 * E * spec.V0 + 2.0 * spec.M * spec.S0; // alpha^2 delta^2
    const double beta_d2 = spec.S0 * spec.S0 - spec.V0 * spec.V0;       // beta^2 delta^2
    const double centre = 0.25 + lambda + beta_d2 / d2;
    if (centre < 0.0) {
        raise(ErrorKind::UnsupportedRegime, "1/4 + lambda + beta^2 < 0: D would be complex");
    }
    SusyFactorization fac;
    fac.delta = d;
    fac.lambda = lambda;
    fac.E = E;
    fac.coupling_sum = alpha_d2 + beta_d2;
    fac.d_const = 0.5 * d + d * std::sqrt(centre);
    fac.c_const = susy_c_of_d(fac.d_const, fac.coupling_sum);

    const double C = fac.c_const, D = fac.d_const;
    fac.residuals[0] = C * C - (spec.M * spec.M - E * E) - d2 * spec.C0 * lambda;
    fac.residuals[1] = 2.0 * C * D - d * D - (d2 * lambda - alpha_d2);
    fac.residuals[2] = D * D - d * D - (d2 * lambda + beta_d2);
    return fac;
}

SusyFactorization solve_cd(const PotentialSpec& spec, double E, double lambda)
{
    SusyFactorization fac = factorize(spec, E, lambda);
    if (!(fac.c_const < 0.0)) {
        raise(ErrorKind::NoNormalizableGroundState, "C >= 0: ground state does not decay at infinity");
    }
    return fac;
}

SusyFactorization SusyFactorization::shifted(int i) const
{
    SusyFactorization out = *this;
    out.d_const = d_const + i * delta;
    out.c_const = susy_c_of_d(out.d_const, coupling_sum);
    out.residuals = {};
    return out;
}

double superpotential(const SusyFactorization& fac, double r)
{
    if (!(r > 0.0)) {
        raise(ErrorKind::Domain, "radius must be positive");
    }
    return -(fac.c_const + fac.d_const * hulthen_shape(fac.delta, r));
}

double superpotential_derivative(const SusyFactorization& fac, double r)
{
    if (!(r > 0.0)) {
        raise(ErrorKind::Domain, "radius must be positive");
    }
    // dy/dr = -delta y (1 + y)
    const double y = hulthen_shape(fac.delta, r);
    return fac.d_const * fac.delta * y * (1.0 + y);
}

std::pair<double, double> partner_potentials(const SusyFactorization& fac, double r)
{
    const double w = superpotential(fac, r);
    const double dw = superpotential_derivative(fac, r);
    return {w * w - dw, w * w + dw};
}

double shape_invariance_remainder(const PotentialSpec& spec, double E, double lambda, int i)
{
    if (i < 1) {
        raise(ErrorKind::Domain, "remainder index starts at 1");
    }
    const SusyFactorization base = factorize(spec, E, lambda);
    const double prev = susy_c_of_d(base.d_const + (i - 1) * base.delta, base.coupling_sum);
    const double next = susy_c_of_d(base.d_const + i * base.delta, base.coupling_sum);
    return prev * prev - next * next;
}

double susy_energy_rhs(const PotentialSpec& spec, double E, int n_r, double lambda, CouplingCase c)
{
    if (n_r < 0) {
        raise(ErrorKind::Domain, "n_r must be nonnegative");
    }
    const PotentialSpec eff = with_coupling(spec, c);
    const SusyFactorization fac = factorize(eff, E, lambda);
    double level = fac.c_const * fac.c_const;
    for (int i = 1; i <= n_r; ++i) {
        level -= shape_invariance_remainder(eff, E, lambda, i);
    }
    return level - lambda * eff.C0 * eff.delta * eff.delta;
}

double susy_energy_residual(const PotentialSpec& spec, double E, int n_r, double lambda, CouplingCase c)
{
    return (spec.M * spec.M - E * E) - susy_energy_rhs(spec, E, n_r, lambda, c);
}

SusyGroundState::SusyGroundState(const SusyFactorization& fac)
    : c_(fac.c_const)
    , d_(fac.d_const)
    , delta_(fac.delta)
    , norm_(1.0)
{
    if (!(c_ < 0.0)) {
        raise(ErrorKind::NoNormalizableGroundState, "C >= 0: ground state not normalizable");
    }
    const double r_end = 40.0 / (-c_) + 10.0 / delta_;
    const double integral = integrate(
        [this](double r) {
            const double v = (*this)(r);
            return v * v;
        },
        0.0, r_end, 20, 1e-13);
    norm_ = 1.0 / std::sqrt(integral);
}

double SusyGroundState::operator()(double r) const
{
    if (!(r > 0.0)) {
        raise(ErrorKind::Domain, "radius must be positive");
    }
    return norm_ * std::exp(c_ * r) * std::pow(-std::expm1(-delta_ * r), d_ / delta_);
}

double ground_state_wf(const SusyFactorization& fac, double r) { return SusyGroundState(fac)(r); }

namespace {

std::vector<double> physical_susy_roots(const PotentialSpec& spec, int n_r, double lambda, CouplingCase c)
{
    const PotentialSpec eff = with_coupling(spec, c);
    const double edge = spec.M * (1.0 - 1e-6);
    std::vector<double> out;
    auto g = [&](double E) { return susy_energy_residual(eff, E, n_r, lambda, c); };
    for (double E : bracket_roots(g, -edge, edge, default_scan_points, 1e-12)) {
        const SusyFactorization fac = factorize(eff, E, lambda).shifted(n_r);
        if (fac.c_const < 0.0) {
            out.push_back(E);
        }
    }
    return out;
}

} // namespace

EquivalenceReport equivalence_report(const PotentialSpec& spec, int n_r, double lambda, CouplingCase c)
{
    EquivalenceReport rep;
    const PotentialSpec eff = with_coupling(spec, c);
    std::vector<double> nu;
    for (const EnergyLevel& lv : solve_energies(eff, n_r, lambda, c)) {
        if (lv.bound) {
            nu.push_back(lv.E);
        }
    }
    const std::vector<double> susy = physical_susy_roots(eff, n_r, lambda, c);
    if (nu.empty() || susy.empty()) {
        rep.found = false;
        rep.abs_diff = (nu.size() == susy.size()) ? 0.0 : std::numeric_limits<double>::infinity();
        return rep;
    }
    rep.found = true;
    rep.E_nu = nu.back();
    rep.E_susy = susy.back();
    if (nu.size() != susy.size()) {
        rep.abs_diff = std::numeric_limits<double>::infinity();
    } else {
        for (std::size_t k = 0; k < nu.size(); ++k) {
            rep.abs_diff = std::max(rep.abs_diff, std::abs(nu[k] - susy[k]));
        }
    }

    const SusyFactorization fac = factorize(eff, rep.E_nu, lambda);
    const SusyFactorization next = fac.shifted(1);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int k = 1; k <= 100; ++k) {
        const double r = 0.05 * k / eff.delta;
        const double diff = partner_potentials(fac, r).second - partner_potentials(next, r).first;
        lo = std::min(lo, diff);
        hi = std::max(hi, diff);
    }
    rep.remainder_flatness = hi - lo;

    // ground-state overlay against the NU n_r = 0 function at the same lambda
    for (const EnergyLevel& lv : solve_energies(eff, 0, lambda, c)) {
        if (!lv.bound) {
            continue;
        }
        const RadialEigenfunction chi(eff, lv, 0, lambda);
        const SusyGroundState gs(solve_cd(eff, lv.E, lambda));
        std::vector<double> ratios;
        for (int k = 1; k <= 50; ++k) {
            const double r = k * 3.0 / (50.0 * eff.delta * chi.sqrt_c());
            ratios.push_back(gs(r) / chi(r));
        }
        double mean = 0.0;
        for (double x : ratios) {
            mean += x;
        }
        mean /= ratios.size();
        double var = 0.0;
        for (double x : ratios) {
            var += (x - mean) * (x - mean);
        }
        rep.ratio_std = std::sqrt(var / ratios.size()) / std::abs(mean);
    }
    return rep;
}

} // namespace kfg
