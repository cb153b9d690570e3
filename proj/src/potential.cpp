#include "kfg/potential.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kfg/errors.hpp"

namespace kfg {

void PotentialSpec::validate() const
{
    if (!(M > 0.0) || !std::isfinite(M)) {
        raise(ErrorKind::Domain, "rest mass M must be positive");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        raise(ErrorKind::Domain, "screening parameter delta must be positive");
    }
    if (!(beta >= 0.0) || !(beta_prime >= 0.0)) {
        raise(ErrorKind::Domain, "ring strengths beta and beta' must be nonnegative");
    }
    if (!(C0 >= 0.0 && C0 <= 1.0)) {
        raise(ErrorKind::Domain, "C0 must lie in [0, 1]");
    }
    if (!std::isfinite(V0) || !std::isfinite(S0)) {
        raise(ErrorKind::Domain, "V0 and S0 must be finite");
    }
}

std::string_view to_string(CouplingCase c)
{
    switch (c) {
        case CouplingCase::VneqS: return "VneqS";
        case CouplingCase::VeqS: return "VeqS";
        case CouplingCase::VeqmS: return "VeqmS";
    }
    return "VneqS";
}

CouplingCase coupling_from_string(std::string_view s)
{
    if (s == "VneqS" || s == "V!=S") {
        return CouplingCase::VneqS;
    }
    if (s == "VeqS" || s == "V=S") {
        return CouplingCase::VeqS;
    }
    if (s == "VeqmS" || s == "V=-S") {
        return CouplingCase::VeqmS;
    }
    raise(ErrorKind::Domain, "unknown coupling case '" + std::string(s) + "'");
}

PotentialSpec with_coupling(const PotentialSpec& spec, CouplingCase c)
{
    PotentialSpec out = spec;
    if (c == CouplingCase::VeqS) {
        out.S0 = spec.V0;
    } else if (c == CouplingCase::VeqmS) {
        out.S0 = -spec.V0;
    }
    return out;
}

namespace {

void require_positive_radius(double r)
{
    if (!(r > 0.0)) {
        raise(ErrorKind::Domain, "radius must be positive");
    }
}

} // namespace

double hulthen_shape(double delta, double r)
{
    // 1/(e^{x} - 1) keeps full precision for small x
    return 1.0 / std::expm1(delta * r);
}

double hulthen_vector(const PotentialSpec& spec, double r)
{
    require_positive_radius(r);
    return -spec.V0 * hulthen_shape(spec.delta, r);
}

double hulthen_scalar(const PotentialSpec& spec, double r)
{
    require_positive_radius(r);
    return -spec.S0 * hulthen_shape(spec.delta, r);
}

double approx_centrifugal(const PotentialSpec& spec, double r)
{
    require_positive_radius(r);
    const double y = hulthen_shape(spec.delta, r);
    // e^{-x}/(1-e^{-x})^2 = y (1 + y)
    return spec.delta * spec.delta * (spec.C0 + y * (1.0 + y));
}

double effective_radial_potential(const PotentialSpec& spec, double E, double lambda, double r,
                                  bool use_approx)
{
    require_positive_radius(r);
    const double y = hulthen_shape(spec.delta, r);
    const double centrifugal = use_approx ? approx_centrifugal(spec, r) : 1.0 / (r * r);
    return -2.0 * (spec.M * spec.S0 + E * spec.V0) * y + (spec.S0 * spec.S0 - spec.V0 * spec.V0) * y * y +
           lambda * centrifugal;
}

double ring_shaped_angular_term(const PotentialSpec& spec, double E, double theta)
{
    const double sin_t = std::sin(theta);
    if (!(theta > 0.0 && theta < std::numbers::pi) || sin_t == 0.0) {
        raise(ErrorKind::Domain, "ring-shaped term is singular at the poles");
    }
    return 2.0 * (spec.M + E) * (spec.beta_prime + spec.beta * std::cos(theta)) / (sin_t * sin_t);
}

} // namespace kfg
