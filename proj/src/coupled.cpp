#include "kfg/coupled.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "kfg/angular.hpp"
#include "kfg/errors.hpp"
#include "kfg/nu_radial.hpp"
#include "kfg/special_functions.hpp"
#include "kfg/susy.hpp"

namespace kfg {

double eta_of_energy(const PotentialSpec& spec, double E, int N, int m) { return solve_angular(spec, E, m, N).lambda; }

double combined_residual(const PotentialSpec& spec, double E, int n_r, int N, int m, CouplingCase c)
{
    if (!(std::abs(E) < spec.M)) {
        raise(ErrorKind::NotBound, "bound states need |E| < M");
    }
    const PotentialSpec eff = with_coupling(spec, c);
    const AngularSolution ang = solve_angular(eff, E, m, N);
    const double eta = ang.lambda;
    const double d2 = eff.delta * eff.delta;
    const double n = n_r;
    double br;
    if (c == CouplingCase::VneqS) {
        const double alpha_sq = (2.0 * E * eff.V0 + 2.0 * eff.M * eff.S0) / d2;
        const double beta_sq = (eff.S0 * eff.S0 - eff.V0 * eff.V0) / d2;
        const double centre = 0.25 + beta_sq + eta;
        if (centre < 0.0) {
            raise(ErrorKind::UnsupportedRegime, "1/4 + beta^2 + eta < 0");
        }
        const double root = std::sqrt(centre);
        br = (alpha_sq - eta - 0.5 - n * (n + 1.0) - (2.0 * n + 1.0) * root) / (2.0 * n + 1.0 + 2.0 * root);
    } else {
        const double A = c == CouplingCase::VeqS ? 2.0 * eff.V0 * (E + eff.M) / d2 : 2.0 * eff.V0 * (E - eff.M) / d2;
        const double L = n + N + ang.zeta + 1.0;
        br = A / (2.0 * L) - 0.5 * L;
    }
    return (eff.M * eff.M - E * E) - (br * br * d2 - eff.C0 * eta * d2);
}

ExistenceFlags existence_check(const PotentialSpec& spec, const EnergyLevel& level, int n_r, double eta)
{
    const PotentialSpec eff = with_coupling(spec, level.coupling);
    ExistenceFlags f;
    const double gamma = 2.0 * (level.E + eff.M);
    const double m2 = double(level.qn.m) * level.qn.m;
    f.ring_ok = m2 >= gamma * (eff.beta - eff.beta_prime);
    try {
        const double br = nu_bracket(nu_parameters(eff, level.E, eta), n_r);
        f.radial_ok = !(eta * eff.C0 > br * br);
    } catch (const Error&) {
        f.radial_ok = false;
    }
    return f;
}

namespace {

struct BranchRoots
{
    bool positive{false};
    bool negative{false};
    bool any_feasible{false};
};

/// Coarse look at the self-consistent residual on each half of (-M, M).
BranchRoots scan_branches(const PotentialSpec& eff, const QuantumNumbers& qn, CouplingCase c,
                          const std::function<double(double)>& eta)
{
    BranchRoots out;
    auto h = [&](double E) {
        try {
            const double v = energy_residual(eff, E, qn.n_r, eta(E), c);
            out.any_feasible = true;
            return v;
        } catch (const Error&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    const double edge = eff.M * (1.0 - 1e-6);
    for (double E : bracket_roots(h, -edge, edge, 512, 1e-10)) {
        try {
            const double lam = eta(E);
            if (nu_bracket(nu_parameters(eff, E, lam), qn.n_r) > 0.0) {
                (E > 0.0 ? out.positive : out.negative) = true;
            }
        } catch (const Error&) {
        }
    }
    return out;
}

/// Physical radial root for fixed eta on the requested side, nearest to `near`, polished to ulp level.
std::optional<double> radial_root(const PotentialSpec& eff, int n_r, double eta, CouplingCase c, bool positive,
                                  double near, const CombinedOptions& opt)
{
    std::function<double(double)> g;
    std::vector<double> roots;
    if (opt.route == Route::SUSY) {
        g = [&](double E) { return susy_energy_residual(eff, E, n_r, eta, c); };
        const double edge = eff.M * (1.0 - 1e-6);
        for (double E : bracket_roots(g, -edge, edge, opt.scan_points, 1e-12)) {
            if (factorize(eff, E, eta).shifted(n_r).c_const < 0.0) {
                roots.push_back(E);
            }
        }
    } else {
        g = [&](double E) { return energy_residual(eff, E, n_r, eta, c); };
        for (const EnergyLevel& lv : solve_energies(eff, n_r, eta, c, opt.scan_points)) {
            if (!lv.spurious) {
                roots.push_back(lv.E);
            }
        }
    }
    std::optional<double> best;
    for (double E : roots) {
        if ((E > 0.0) != positive) {
            continue;
        }
        if (!best || std::abs(E - near) < std::abs(*best - near)) {
            best = E;
        }
    }
    if (!best) {
        return best;
    }
    const double w = 1e-10 * eff.M;
    const double lo = std::max(*best - w, -eff.M * (1.0 - 1e-12));
    const double hi = std::min(*best + w, eff.M * (1.0 - 1e-12));
    if (std::signbit(g(lo)) != std::signbit(g(hi))) {
        best = find_root_bracketed(g, lo, hi, 1e-15 * eff.M, 200);
    }
    return best;
}

} // namespace

EnergyLevel solve_combined(const PotentialSpec& spec, const QuantumNumbers& qn, CouplingCase c,
                           const CombinedOptions& opt)
{
    spec.validate();
    if (!(opt.tol > 0.0) || opt.max_iter < 1 || !(opt.damping > 0.0 && opt.damping <= 1.0)) {
        raise(ErrorKind::Domain, "combined solver needs tol > 0, max_iter >= 1 and damping in (0, 1]");
    }
    if (opt.route == Route::Oracle) {
        raise(ErrorKind::Domain, "combined solver runs on the NU or SUSY residual only");
    }
    if (qn.n_r < 0 || qn.N < 0) {
        raise(ErrorKind::Domain, "quantum numbers n_r and N must be nonnegative");
    }
    const PotentialSpec eff = with_coupling(spec, c);

    std::optional<double> frozen;
    if (opt.freeze_lambda) {
        frozen = eta_of_energy(eff, eff.M, qn.N, qn.m);
    }
    const std::function<double(double)> eta = [&](double E) {
        return frozen ? *frozen : eta_of_energy(eff, E, qn.N, qn.m);
    };

    bool positive = true;
    if (opt.branch == Branch::Auto) {
        const BranchRoots br = scan_branches(eff, qn, c, eta);
        if (!br.positive && !br.negative) {
            if (!br.any_feasible) {
                raise(ErrorKind::InfeasibleRing, "m^2 < gamma (beta - beta') across the whole energy range");
            }
            raise(ErrorKind::NoBoundState, "no self-consistent bound level for these quantum numbers");
        }
        positive = br.positive;
    } else {
        positive = opt.branch == Branch::Positive;
    }

    double E = (positive ? 1.0 : -1.0) * eff.M * (1.0 - 1e-3);
    std::vector<double> history{E};
    for (int k = 0; k < opt.max_iter; ++k) {
        const double lam = eta(E);
        const std::optional<double> next = radial_root(eff, qn.n_r, lam, c, positive, E, opt);
        if (!next) {
            raise(ErrorKind::NoBoundState, "radial equation has no physical root on the selected branch");
        }
        if (std::abs(*next - E) < opt.tol) {
            EnergyLevel lv;
            lv.E = *next;
            lv.qn = qn;
            lv.lambda = eta(*next);
            lv.coupling = c;
            lv.route = opt.route;
            lv.iterations = k;
            if (opt.route == Route::SUSY) {
                lv.residual = susy_energy_residual(eff, *next, qn.n_r, lv.lambda, c);
            } else {
                lv.residual = frozen ? energy_residual(eff, *next, qn.n_r, *frozen, c)
                                     : combined_residual(eff, *next, qn.n_r, qn.N, qn.m, c);
            }
            lv.bound = existence_check(eff, lv, qn.n_r, lv.lambda).bound();
            return lv;
        }
        const double w = k == 0 ? 1.0 : opt.damping;
        E += w * (*next - E);
        history.push_back(E);
    }
    throw ConvergenceError("fixed-point iteration did not settle within " + std::to_string(opt.max_iter) +
                               " steps",
                           std::move(history));
}

std::vector<EnergyLevel> solve_combined_branches(const PotentialSpec& spec, const QuantumNumbers& qn, CouplingCase c,
                                                 const CombinedOptions& opt)
{
    spec.validate();
    const PotentialSpec eff = with_coupling(spec, c);
    std::optional<double> frozen;
    if (opt.freeze_lambda) {
        frozen = eta_of_energy(eff, eff.M, qn.N, qn.m);
    }
    const std::function<double(double)> eta = [&](double E) {
        return frozen ? *frozen : eta_of_energy(eff, E, qn.N, qn.m);
    };
    const BranchRoots br = scan_branches(eff, qn, c, eta);
    std::vector<EnergyLevel> out;
    for (const auto& [present, branch] : {std::pair{br.positive, Branch::Positive}, std::pair{br.negative, Branch::Negative}}) {
        if (!present) {
            continue;
        }
        CombinedOptions o = opt;
        o.branch = branch;
        out.push_back(solve_combined(spec, qn, c, o));
    }
    return out;
}

} // namespace kfg
