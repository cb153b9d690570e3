#pragma once

#include <vector>

#include "kfg/energy_level.hpp"
#include "kfg/potential.hpp"

namespace kfg {

enum class Branch { Auto, Positive, Negative };

struct CombinedOptions
{
    double tol{1e-12};
    int max_iter{200};
    double damping{0.5};
    bool freeze_lambda{false}; ///< evaluate eta once at E = M instead of iterating
    Branch branch{Branch::Auto};
    int scan_points{2048};
    Route route{Route::NU}; ///< residual used for the radial step: NU or SUSY
};

/// Existence conditions at a converged energy.
struct ExistenceFlags
{
    bool ring_ok{true};   ///< m^2 >= gamma (beta - beta')
    bool radial_ok{true}; ///< lambda C0 does not exceed the squared energy bracket
    bool bound() const { return ring_ok && radial_ok; }
};

/// eta(E) = (N + zeta(E))(N + zeta(E) + 1).
double eta_of_energy(const PotentialSpec& spec, double E, int N, int m);

/// Residual of the combined spectrum written with eta and L = n_r + N + zeta + 1:
/// the general form for V!=S, and [A/(2L) - L/2]^2 delta^2 - C0 eta delta^2 for V=S / V=-S.
double combined_residual(const PotentialSpec& spec, double E, int n_r, int N, int m, CouplingCase c);

/// Evaluates both printed existence inequalities at `level.E`.
ExistenceFlags existence_check(const PotentialSpec& spec, const EnergyLevel& level, int n_r, double eta);

/// Self-consistent level of the combined Hulthen plus ring-shaped problem.
///
/// The angular separation constant depends on E through gamma = 2(E + M), so
/// eta(E_k) feeds a radial solve whose root E_new updates
/// E_{k+1} = E_k + w (E_new - E_k); the first step is undamped because the seed
/// +-M(1 - 1e-3) carries no information. Stops when |E_new - E_k| < tol.
/// Throws InfeasibleRing, NoBoundState or ConvergenceError (with the iterate history).
EnergyLevel solve_combined(const PotentialSpec& spec, const QuantumNumbers& qn, CouplingCase c,
                           const CombinedOptions& opt = {});

/// Converged levels on each energy branch that supports one (positive first).
std::vector<EnergyLevel> solve_combined_branches(const PotentialSpec& spec, const QuantumNumbers& qn, CouplingCase c,
                                                 const CombinedOptions& opt = {});

} // namespace kfg
