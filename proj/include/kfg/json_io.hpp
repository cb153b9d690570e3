#pragma once

#include <json.hpp>

#include "kfg/angular.hpp"
#include "kfg/energy_level.hpp"
#include "kfg/potential.hpp"
#include "kfg/susy.hpp"

namespace kfg {

using json = nlohmann::json;

/// Flat object {"M","V0","S0","delta","beta","beta_prime","C0"}; missing keys keep their defaults.
void to_json(json& j, const PotentialSpec& s);
/// Validates after reading; unknown keys are rejected.
void from_json(const json& j, PotentialSpec& s);

void to_json(json& j, const AngularSolution& a);

/// {"E","n_r","N","m","lambda","case","residual","flags","route"}, plus "iterations" and "node_count" when set.
void to_json(json& j, const EnergyLevel& lv);
void from_json(const json& j, EnergyLevel& lv);

void to_json(json& j, const EquivalenceReport& r);

} // namespace kfg
