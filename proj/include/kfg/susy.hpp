#pragma once

#include <array>
#include <utility>

#include "kfg/potential.hpp"

namespace kfg {

/// Superpotential W(r) = -(C + D y), y = e^{-delta r}/(1 - e^{-delta r}).
///
/// C and D come from matching W^2 - W' against the radial effective potential:
///   C^2          = eps^2 delta^2 + delta^2 C0 lambda
///   2CD - delta D = delta^2 lambda - alpha^2 delta^2
///   D^2 - delta D = delta^2 lambda + delta^2 beta^2
struct SusyFactorization
{
    double c_const{0.0};
    double d_const{0.0};
    double delta{0.0};
    double lambda{0.0};
    double E{0.0};
    double coupling_sum{0.0}; ///< delta^2 (alpha^2 + beta^2)
    /// Residuals of the three matching relations above, in that order.
    std::array<double, 3> residuals{};

    /// Factorization with D -> D + i delta and C -> C(D + i delta), the shape-invariant shift.
    SusyFactorization shifted(int i) const;
};

/// C as a function of D: D/2 - delta^2 (alpha^2 + beta^2) / (2D).
double susy_c_of_d(double D, double coupling_sum);

/// D from the positive branch, C from the second relation. `spec` must carry the
/// coupling case. Throws NoNormalizableGroundState when C >= 0.
SusyFactorization solve_cd(const PotentialSpec& spec, double E, double lambda);

/// Same algebra without the C < 0 requirement (used for excited partners and diagnostics).
SusyFactorization factorize(const PotentialSpec& spec, double E, double lambda);

double superpotential(const SusyFactorization& fac, double r);
/// dW/dr, analytic.
double superpotential_derivative(const SusyFactorization& fac, double r);

/// (V1, V2) = (W^2 - W', W^2 + W').
std::pair<double, double> partner_potentials(const SusyFactorization& fac, double r);

/// R(D_i) = V2(D_{i-1}, r) - V1(D_i, r) = C(D_{i-1})^2 - C(D_i)^2, independent of r.
double shape_invariance_remainder(const PotentialSpec& spec, double E, double lambda, int i);

/// M^2 - E^2 predicted by telescoping the remainders down the hierarchy:
///   C(D)^2 - sum_{i=1..n_r} R(D_i) - lambda C0 delta^2.
double susy_energy_rhs(const PotentialSpec& spec, double E, int n_r, double lambda, CouplingCase c);

/// (M^2 - E^2) - susy_energy_rhs.
double susy_energy_residual(const PotentialSpec& spec, double E, int n_r, double lambda, CouplingCase c);

/// Unit-norm ground state N0 e^{C r} (1 - e^{-delta r})^{D/delta}; N0 fixed by quadrature.
class SusyGroundState
{
  public:
    /// Throws NonNormalizable (NoNormalizableGroundState) when C >= 0.
    explicit SusyGroundState(const SusyFactorization& fac);

    double operator()(double r) const;
    double norm() const { return norm_; }

  private:
    double c_;
    double d_;
    double delta_;
    double norm_;
};

double ground_state_wf(const SusyFactorization& fac, double r);

/// Cross-route comparison for one (spec, n_r, lambda, case).
struct EquivalenceReport
{
    double E_nu{0.0};
    double E_susy{0.0};
    double abs_diff{0.0};
    double remainder_flatness{0.0}; ///< max - min of V2(D) - V1(D + delta) over the radius grid
    double ratio_std{0.0};          ///< std/mean of the ground-state ratio to the NU n_r = 0 function
    bool found{false};              ///< false when no physical level exists
};

EquivalenceReport equivalence_report(const PotentialSpec& spec, int n_r, double lambda, CouplingCase c);

} // namespace kfg
