#pragma once

#include <vector>

#include "kfg/energy_level.hpp"
#include "kfg/potential.hpp"

namespace kfg {

/// Intermediate algebra of the Nikiforov-Uvarov reduction for one (E, lambda).
///
/// With s = e^{-delta r} the radial equation becomes
///   chi'' + chi' (1-s)/(s(1-s)) + [-eps^2 (1-s)^2 + alpha^2 s(1-s) - beta^2 s^2
///                                  - lambda C0 (1-s)^2 - lambda s] / (s(1-s))^2 chi = 0,
/// whose polynomial solutions fix sqrt(c) and K below.
struct NuParameters
{
    double eps{0.0};            ///< sqrt(M^2 - E^2) / delta
    double alpha_sq{0.0};       ///< (2 E V0 + 2 M S0) / delta^2
    double beta_sq{0.0};        ///< (S0^2 - V0^2) / delta^2
    double alpha_prime_sq{0.0}; ///< 2 V0 (E - M) / delta^2
    double a{0.0};
    double b{0.0};
    double c{0.0};
    double sqrt_c{0.0};
    double K{0.0}; ///< 1/2 + sqrt(1/4 + beta^2 + lambda)
    double lambda{0.0};
};

/// Throws NotBound for |E| >= M and UnsupportedRegime when 1/4 + beta^2 + lambda < 0.
NuParameters nu_parameters(const PotentialSpec& spec, double E, double lambda);

/// The signed quantity squared on the right of the energy equation:
///   [alpha^2 - lambda - 1/2 - n(n+1) - (2n+1) sqrt(1/4 + beta^2 + lambda)] / (2n + 1 + 2 sqrt(...)).
/// A physical level needs this to be positive (it equals sqrt(c) there).
double nu_bracket(const NuParameters& p, int n_r);

/// Right-hand side M^2 - E^2 = bracket^2 delta^2 - lambda C0 delta^2 using the spec's own S0.
double energy_rhs_general(const PotentialSpec& spec, double E, int n_r, double lambda);

/// Right-hand side written per coupling case: general form for V!=S, and the
/// [A/(2L) - L/2]^2 delta^2 - lambda C0 delta^2 form with L = n_r + l + 1 for V=S
/// (A = alpha^2) and V=-S (A = alpha'^2).
double energy_rhs(const PotentialSpec& spec, double E, int n_r, double lambda, CouplingCase c);

/// g(E) = (M^2 - E^2) - rhs; its roots are the NU bound-state candidates.
double energy_residual(const PotentialSpec& spec, double E, int n_r, double lambda, CouplingCase c);

/// lambda_bar from the pi(s) selection minus lambda_bar_n from the polynomial condition.
/// Vanishes at a physical root; stays nonzero at spurious ones.
double nu_quantization_defect(const NuParameters& p, int n_r);

/// Default number of scan samples over (-M, M).
inline constexpr int default_scan_points = 2048;

/// Scans E over (-M(1 - 1e-6), M(1 - 1e-6)), brackets sign changes of the residual and
/// refines each root to 1e-12. Spurious roots are returned too, with the flag set.
std::vector<EnergyLevel> solve_energies(const PotentialSpec& spec, int n_r, double lambda, CouplingCase c,
                                        int scan_points = default_scan_points);

/// C_{n_r} from the gamma-function closed form so that the r-integral of chi^2 is one.
double radial_norm(double sqrt_c, double K, int n_r, double delta);

/// chi(r) = C s^{sqrt c} (1-s)^K P_{n_r}^{(2 sqrt c, 2K-1)}(1 - 2s), s = e^{-delta r}.
class RadialEigenfunction
{
  public:
    /// The level's coupling case is applied to `spec`. Throws NotBound for spurious levels.
    RadialEigenfunction(const PotentialSpec& spec, const EnergyLevel& level, int n_r, double lambda);

    double operator()(double r) const;

    int n_r() const { return n_r_; }
    double sqrt_c() const { return sqrt_c_; }
    double K() const { return K_; }
    double norm() const { return norm_; }
    double energy() const { return E_; }
    double delta() const { return delta_; }
    /// Integral of chi^2 over (0, inf) measured by quadrature with the closed-form constant.
    double closed_form_norm_check() const { return norm_check_; }

  private:
    int n_r_;
    double sqrt_c_;
    double K_;
    double delta_;
    double E_;
    double norm_;
    double norm_check_;
};

/// Integral of chi^2 over (0, inf) by adaptive quadrature.
double radial_norm_integral(const RadialEigenfunction& chi);

double radial_wavefunction(const PotentialSpec& spec, const EnergyLevel& level, int n_r, double lambda, double r);

} // namespace kfg
