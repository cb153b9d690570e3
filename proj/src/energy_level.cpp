#include "kfg/energy_level.hpp"

namespace kfg {

std::string_view to_string(Route r)
{
    switch (r) {
    case Route::NU: return "NU";
    case Route::SUSY: return "SUSY";
    case Route::Oracle: return "oracle";
    }
    return "unknown";
}

std::vector<std::string> EnergyLevel::flags() const
{
    std::vector<std::string> out;
    if (bound) {
        out.emplace_back("bound");
    }
    if (spurious) {
        out.emplace_back("spurious");
    }
    return out;
}

} // namespace kfg
