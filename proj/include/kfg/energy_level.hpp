#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kfg/potential.hpp"

namespace kfg {

enum class Route { NU, SUSY, Oracle };

std::string_view to_string(Route r);

/// A converged bound-state energy together with its provenance and diagnostics.
struct EnergyLevel
{
    double E{0.0};
    QuantumNumbers qn{};
    double lambda{0.0}; ///< separation constant used by the radial equation
    CouplingCase coupling{CouplingCase::VneqS};
    Route route{Route::NU};
    double residual{0.0}; ///< value of the route's residual function at E
    bool bound{false};    ///< existence conditions hold and the root is physical
    bool spurious{false}; ///< root of the squared energy equation with the wrong sign branch
    int iterations{0};    ///< fixed-point iterations (combined solver only)
    int node_count{-1};   ///< interior nodes reported by the oracle, -1 when not computed

    std::vector<std::string> flags() const;
};

} // namespace kfg
