#include "kfg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "kfg/errors.hpp"
#include "kfg/special_functions.hpp"

namespace kfg {

void OracleConfig::validate(double delta) const
{
    if (grid_n < 2000) {
        raise(ErrorKind::Domain, "oracle grid_n must be at least 2000");
    }
    if (r_max != 0.0 && r_max * delta < 20.0) {
        raise(ErrorKind::Domain, "oracle r_max * delta must be at least 20");
    }
    if (scan_points < 8 || angular_grid_n < 16) {
        raise(ErrorKind::Domain, "oracle scan sizes too small");
    }
}

namespace {

constexpr double big = 1e150;

struct State
{
    double chi;
    double dchi;
};

class RadialProblem
{
  public:
    RadialProblem(const PotentialSpec& spec, double E, double lambda, bool use_approx)
        : spec_(spec)
        , E_(E)
        , lambda_(lambda)
        , use_approx_(use_approx)
        , gap_(spec.M * spec.M - E * E)
    {
    }

    double q(double r) const { return effective_radial_potential(spec_, E_, lambda_, r, use_approx_) + gap_; }

    double q_infinity() const
    {
        return gap_ + (use_approx_ ? lambda_ * spec_.delta * spec_.delta * spec_.C0 : 0.0);
    }

    /// Coefficient of 1/r in the small-r expansion of q.
    double coulomb_coefficient() const
    {
        return -(2.0 * (spec_.M * spec_.S0 + E_ * spec_.V0) + (spec_.S0 * spec_.S0 - spec_.V0 * spec_.V0)) /
               spec_.delta;
    }

    double origin_exponent() const
    {
        const double beta_sq = (spec_.S0 * spec_.S0 - spec_.V0 * spec_.V0) / (spec_.delta * spec_.delta);
        const double centre = 0.25 + lambda_ + beta_sq;
        if (centre < 0.0) {
            raise(ErrorKind::UnsupportedRegime, "attractive 1/r^2 core: no regular solution at the origin");
        }
        return 0.5 + std::sqrt(centre);
    }

  private:
    const PotentialSpec& spec_;
    double E_;
    double lambda_;
    bool use_approx_;
    double gap_;
};

int sign_changes(double before, double after) { return (before != 0.0 && std::signbit(before) != std::signbit(after)) ? 1 : 0; }

} // namespace

ShootResult shoot_radial(const PotentialSpec& spec, double E, double lambda, bool use_approx, const OracleConfig& cfg)
{
    if (!(std::abs(E) < spec.M)) {
        raise(ErrorKind::NotBound, "shooting needs |E| < M");
    }
    cfg.validate(spec.delta);
    const RadialProblem prob(spec, E, lambda, use_approx);
    const double K = prob.origin_exponent();
    const double r0 = 1e-6 / spec.delta;

    const double q_inf = prob.q_infinity();
    if (!(q_inf > 0.0)) {
        raise(ErrorKind::NotBound, "no decaying solution at infinity");
    }
    const double kappa = std::sqrt(q_inf);
    ShootResult res;
    res.r_max = cfg.r_max > 0.0 ? cfg.r_max : std::min(std::max(20.0, 40.0 * spec.delta / kappa), 4000.0) / spec.delta;

    // matching radius: outermost classical turning point, else the minimum of q
    {
        constexpr int samples = 800;
        const double lr0 = std::log(r0), lr1 = std::log(res.r_max);
        double r_turn = 0.0, r_min = r0, q_min = std::numeric_limits<double>::infinity();
        for (int i = 1; i < samples; ++i) {
            const double r = std::exp(lr0 + (lr1 - lr0) * i / samples);
            const double qv = prob.q(r);
            if (qv < 0.0) {
                r_turn = r;
            }
            if (qv < q_min) {
                q_min = qv;
                r_min = r;
            }
        }
        res.r_match = r_turn > 0.0 ? r_turn : r_min;
        res.r_match = std::clamp(res.r_match, 1e3 * r0, 0.5 * res.r_max);
    }

    // outward, in t = ln r: chi_tt = chi_t + r^2 q chi
    const int n = cfg.grid_n;
    State out{1.0, 0.0};
    {
        const double a1 = prob.coulomb_coefficient() / (2.0 * K);
        out.chi = 1.0 + a1 * r0;
        out.dchi = K + (K + 1.0) * a1 * r0; // r d/dr of r^K (1 + a1 r), scaled by r0^-K
    }
    const double t0 = std::log(r0), t1 = std::log(res.r_match);
    const double dt = (t1 - t0) / n;
    auto f_out = [&](double t, const State& s) {
        const double r = std::exp(t);
        return State{s.dchi, s.dchi + r * r * prob.q(r) * s.chi};
    };
    int nodes_out = 0;
    for (int i = 0; i < n; ++i) {
        const double t = t0 + i * dt;
        const State k1 = f_out(t, out);
        const State k2 = f_out(t + 0.5 * dt, {out.chi + 0.5 * dt * k1.chi, out.dchi + 0.5 * dt * k1.dchi});
        const State k3 = f_out(t + 0.5 * dt, {out.chi + 0.5 * dt * k2.chi, out.dchi + 0.5 * dt * k2.dchi});
        const State k4 = f_out(t + dt, {out.chi + dt * k3.chi, out.dchi + dt * k3.dchi});
        const State next{out.chi + dt / 6.0 * (k1.chi + 2.0 * k2.chi + 2.0 * k3.chi + k4.chi),
                         out.dchi + dt / 6.0 * (k1.dchi + 2.0 * k2.dchi + 2.0 * k3.dchi + k4.dchi)};
        nodes_out += sign_changes(out.chi, next.chi);
        out = next;
        if (std::abs(out.chi) > big || std::abs(out.dchi) > big) {
            out.chi /= big;
            out.dchi /= big;
        }
        if (!std::isfinite(out.chi) || !std::isfinite(out.dchi)) {
            raise(ErrorKind::OracleFailure, "outward integration overflowed");
        }
    }
    const double chi_o = out.chi;
    const double dchi_o = out.dchi / res.r_match;

    // inward, in r, starting on e^{-kappa r}
    State in{1.0, -std::sqrt(std::max(prob.q(res.r_max), 0.25 * q_inf))};
    const double h = -(res.r_max - res.r_match) / n;
    auto f_in = [&](double r, const State& s) { return State{s.dchi, prob.q(r) * s.chi}; };
    int nodes_in = 0;
    for (int i = 0; i < n; ++i) {
        const double r = res.r_max + i * h;
        const State k1 = f_in(r, in);
        const State k2 = f_in(r + 0.5 * h, {in.chi + 0.5 * h * k1.chi, in.dchi + 0.5 * h * k1.dchi});
        const State k3 = f_in(r + 0.5 * h, {in.chi + 0.5 * h * k2.chi, in.dchi + 0.5 * h * k2.dchi});
        const State k4 = f_in(r + h, {in.chi + h * k3.chi, in.dchi + h * k3.dchi});
        const State next{in.chi + h / 6.0 * (k1.chi + 2.0 * k2.chi + 2.0 * k3.chi + k4.chi),
                         in.dchi + h / 6.0 * (k1.dchi + 2.0 * k2.dchi + 2.0 * k3.dchi + k4.dchi)};
        nodes_in += sign_changes(in.chi, next.chi);
        in = next;
        if (std::abs(in.chi) > big || std::abs(in.dchi) > big) {
            in.chi /= big;
            in.dchi /= big;
        }
        if (!std::isfinite(in.chi) || !std::isfinite(in.dchi)) {
            raise(ErrorKind::OracleFailure, "inward integration overflowed");
        }
    }
    const double chi_i = in.chi;
    const double dchi_i = in.dchi;

    const double l_out = dchi_o / chi_o;
    const double l_in = dchi_i / chi_i;
    res.match_defect = l_out - l_in;
    res.wronskian = (dchi_o * chi_i - chi_o * dchi_i) /
                    (std::hypot(chi_o, dchi_o) * std::hypot(chi_i, dchi_i));
    res.node_count = nodes_out + nodes_in;
    res.sturm_index = res.node_count + (l_out < l_in ? 1 : 0);
    return res;
}

EnergyLevel solve_ode_energy(const PotentialSpec& spec, int n_r, double lambda, bool use_approx, const OracleConfig& cfg,
                             std::optional<double> hint)
{
    cfg.validate(spec.delta);
    const double edge = spec.M * (1.0 - 1e-6);
    auto w = [&](double E) { return shoot_radial(spec, E, lambda, use_approx, cfg).wronskian; };

    auto candidates = [&](double lo, double hi, int points) {
        std::vector<double> roots;
        for (double E : bracket_roots(w, lo, hi, points, 1e-13)) {
            if (shoot_radial(spec, E, lambda, use_approx, cfg).node_count == n_r) {
                roots.push_back(E);
            }
        }
        return roots;
    };

    std::vector<double> roots;
    if (hint) {
        double half = 0.01 * spec.M;
        for (int attempt = 0; attempt < 3 && roots.empty(); ++attempt, half *= 4.0) {
            const double lo = std::max(-edge, *hint - half);
            const double hi = std::min(edge, *hint + half);
            roots = candidates(lo, hi, 24);
        }
    }
    if (roots.empty()) {
        roots = candidates(-edge, edge, cfg.scan_points);
    }
    if (roots.empty()) {
        raise(ErrorKind::NoBoundState, "oracle found no level with " + std::to_string(n_r) + " nodes");
    }
    double best = roots.back();
    if (hint) {
        best = *std::min_element(roots.begin(), roots.end(),
                                 [&](double a, double b) { return std::abs(a - *hint) < std::abs(b - *hint); });
    }
    const ShootResult sr = shoot_radial(spec, best, lambda, use_approx, cfg);
    EnergyLevel lv;
    lv.E = best;
    lv.qn = QuantumNumbers{n_r, 0, 0};
    lv.lambda = lambda;
    lv.route = Route::Oracle;
    lv.residual = sr.match_defect;
    lv.node_count = sr.node_count;
    lv.bound = true;
    return lv;
}

double fd_angular_eig(const PotentialSpec& spec, double E, int m, int k_index, const OracleConfig& cfg)
{
    const int n = cfg.angular_grid_n;
    if (k_index < 0 || k_index >= n) {
        raise(ErrorKind::Domain, "angular eigenvalue index out of range");
    }
    const double gamma = 2.0 * (E + spec.M);
    const double w0 = double(m) * m + gamma * spec.beta_prime;
    if (w0 + gamma * spec.beta < 0.0 || w0 - gamma * spec.beta < 0.0) {
        raise(ErrorKind::OracleFailure, "attractive pole singularity: angular operator unbounded below");
    }
    const double h = std::numbers::pi / n;
    Eigen::VectorXd diag(n), sub(n - 1), weight(n);
    for (int j = 0; j < n; ++j) {
        const double theta = (j + 0.5) * h;
        const double s = std::sin(theta);
        const double face_lo = std::sin(j * h);
        const double face_hi = std::sin((j + 1) * h);
        weight(j) = s;
        diag(j) = (face_lo + face_hi) / (h * h) + (w0 + gamma * spec.beta * std::cos(theta)) / s;
        if (j + 1 < n) {
            sub(j) = -face_hi / (h * h);
        }
    }
    // symmetric scaling by weight^{-1/2} on both sides
    for (int j = 0; j < n; ++j) {
        diag(j) /= weight(j);
        if (j + 1 < n) {
            sub(j) /= std::sqrt(weight(j) * weight(j + 1));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        raise(ErrorKind::OracleFailure, "tridiagonal eigensolver did not converge");
    }
    return solver.eigenvalues()(k_index);
}

} // namespace kfg
