#pragma once

#include <string>

#include "json.hpp"

#include "stefan/boundary_path.hpp"
#include "stefan/config.hpp"
#include "stefan/harness.hpp"
#include "stefan/initial_law.hpp"
#include "stefan/particles.hpp"
#include "stefan/subprob_grid.hpp"

namespace stefan::io {

using json = nlohmann::ordered_json;

SimulationConfig config_from_json(const json& j);
json config_to_json(const SimulationConfig& cfg);

/// Law block: {"variant": "...", ...} with an optional "shift". The
/// grid_density variant accepts inline cells or {"csv": "file"} with
/// two columns x,density at uniform spacing.
InitialLaw law_from_json(const json& j, const std::string& base_dir = "");

/// Full config file: SimulationConfig fields plus a "law" block.
struct LoadedConfig {
    SimulationConfig config;
    InitialLaw law;
};
LoadedConfig load_config_file(const std::string& path);

/// CSV with header "t,lambda", 12 significant digits.
void write_path_csv(const std::string& path, const BoundaryPath& p);
BoundaryPath read_path_csv(const std::string& path);

/// Two-column CSV x,density (uniform x spacing, cell midpoints).
SubProbabilityGrid read_density_csv(const std::string& path);

json report_to_json(const ExperimentReport& rep);
json cascade_log_to_json(const CascadeLog& log);

void write_json(const std::string& path, const json& j);

} // namespace stefan::io
