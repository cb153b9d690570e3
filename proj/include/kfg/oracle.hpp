#pragma once

#include <optional>

#include "kfg/energy_level.hpp"
#include "kfg/potential.hpp"

namespace kfg {

/// Brute-force settings for the shooting and finite-difference oracles.
struct OracleConfig
{
    double r_max{0.0};         ///< outer radius; 0 picks max(20/delta, 40/kappa) per energy
    int grid_n{20000};         ///< RK4 steps on each side of the matching radius
    double match_tol{1e-8};    ///< acceptable log-derivative mismatch at a converged level
    int max_outer_iter{200};   ///< cap on bisection/secant steps in energy
    int scan_points{400};      ///< energy samples for a blind level search
    int angular_grid_n{4000};  ///< cells of the finite-volume theta grid

    void validate(double delta) const;
};

struct ShootResult
{
    double match_defect{0.0}; ///< outward minus inward log-derivative at r_match
    double wronskian{0.0};    ///< normalized Wronskian, continuous in E, zero at eigenvalues
    int node_count{0};        ///< interior zeros of the stitched solution
    int sturm_index{0};       ///< node_count plus one when the outward log-derivative lies below the inward one
    double r_match{0.0};
    double r_max{0.0};
};

/// Integrates chi'' = [V_eff(r; E) + M^2 - E^2] chi outward from r0 = 1e-6/delta (in ln r,
/// starting on the regular r^K branch) and inward from r_max on the decaying branch,
/// with fixed-step RK4 on both sides. `spec` is used as given (apply with_coupling first).
ShootResult shoot_radial(const PotentialSpec& spec, double E, double lambda, bool use_approx,
                         const OracleConfig& cfg = {});

/// Level with exactly n_r nodes found by scanning the Wronskian in E and refining its roots.
/// With a hint, the search starts in a window around it and the closest qualifying root wins;
/// otherwise the highest-energy one does. Throws NoBoundState when nothing qualifies.
EnergyLevel solve_ode_energy(const PotentialSpec& spec, int n_r, double lambda, bool use_approx,
                             const OracleConfig& cfg = {}, std::optional<double> hint = std::nullopt);

/// k-th eigenvalue (k = 0, 1, ...) of the polar operator
///   -(1/sin t)(sin t Theta')' + [m^2 + gamma (beta' + beta cos t)] / sin^2 t Theta = lambda Theta
/// on a cell-centred finite-volume grid with cfg.angular_grid_n cells.
double fd_angular_eig(const PotentialSpec& spec, double E, int m, int k_index, const OracleConfig& cfg = {});

} // namespace kfg
