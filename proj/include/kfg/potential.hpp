#pragma once

#include <string_view>

namespace kfg {

/// Couplings of the Hulthen plus ring-shaped problem in natural units (hbar = c = 1).
struct PotentialSpec
{
    double M{1.0};          ///< rest mass
    double V0{0.0};         ///< vector Hulthen strength
    double S0{0.0};         ///< scalar Hulthen strength
    double delta{0.1};      ///< screening parameter, > 0
    double beta{0.0};       ///< ring strength multiplying cos(theta)
    double beta_prime{0.0}; ///< constant ring strength
    double C0{1.0 / 12.0};  ///< constant in the improved centrifugal approximation

    /// Throws Domain unless M > 0, delta > 0, beta, beta' >= 0 and C0 in [0, 1].
    void validate() const;
};

/// How the scalar coupling relates to the vector one.
enum class CouplingCase {
    VneqS, ///< independent S0 and V0
    VeqS,  ///< S0 = V0
    VeqmS, ///< S0 = -V0
};

std::string_view to_string(CouplingCase c);
CouplingCase coupling_from_string(std::string_view s);

/// Copy of `spec` with S0 forced by the coupling case (V=S sets S0=V0, V=-S sets S0=-V0).
PotentialSpec with_coupling(const PotentialSpec& spec, CouplingCase c);

struct QuantumNumbers
{
    int n_r{0}; ///< radial quantum number
    int N{0};   ///< degree of the angular Jacobi polynomial
    int m{0};   ///< magnetic quantum number
};

/// e^{-delta r} / (1 - e^{-delta r}), the Hulthen shape factor.
double hulthen_shape(double delta, double r);

/// V(r) = -V0 e^{-delta r}/(1 - e^{-delta r}).
double hulthen_vector(const PotentialSpec& spec, double r);
/// S(r) = -S0 e^{-delta r}/(1 - e^{-delta r}).
double hulthen_scalar(const PotentialSpec& spec, double r);

/// delta^2 [C0 + e^{-delta r}/(1 - e^{-delta r})^2], the smooth stand-in for 1/r^2.
double approx_centrifugal(const PotentialSpec& spec, double r);

/// Effective radial potential of the Klein-Gordon radial equation
///   chi'' = [V_eff(r; E) + M^2 - E^2] chi
/// with V_eff = -2(M S0 + E V0) y + (S0^2 - V0^2) y^2 + lambda * centrifugal(r),
/// y = e^{-delta r}/(1 - e^{-delta r}); `use_approx` selects the approximated
/// centrifugal term instead of 1/r^2.
double effective_radial_potential(const PotentialSpec& spec, double E, double lambda, double r,
                                  bool use_approx);

/// (2 / sin^2 theta) (M + E)(beta' + beta cos theta).
double ring_shaped_angular_term(const PotentialSpec& spec, double E, double theta);

} // namespace kfg
