#pragma once

#include <string>

#include "config.hpp"
#include "perilimit/potentials.hpp"
#include "perilimit/profile.hpp"

namespace perilimit::cli {

/// g built from "<section>.g.*" keys.
ScalarProfile profile_from_config(const RunConfig& cfg, const std::string& section);

/// Stored energy from [density]; the label is the zoo name.
StoredEnergy density_from_config(const RunConfig& cfg);

/// Bond potential from [potential] for space dimension n.
PairwisePotential potential_from_config(const RunConfig& cfg, int n);

/// {"kind": ..., parameters...}; throws ConfigError for custom profiles.
Json profile_to_json(const ScalarProfile& g);
ScalarProfile profile_from_json(const Json& j);

/// Built-in densities and potentials with their parameter keys.
std::string list_zoo();

}  // namespace perilimit::cli
