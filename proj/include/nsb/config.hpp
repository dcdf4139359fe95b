// INI configuration for the command-line experiments.
//
//   [physics]    nu, kappa, g, calN, qg_unit_diffusion
//   [lattice]    kind, M, g1sq, g2sq            (g1sq, g2sq accept "p/q")
//   [time]       T, dt, sample_dt
//   [init]       kind, shell_max, amplitude, rho_scale, sector
//   [run]        kernel, keep_cancelling_pair, limit_all_resonant, N_list, census_M, census_shells, grid, table_cache
//   [tolerances] divergence, reality
//
// Unknown sections or keys are errors. Overrides use "section.key=value".
#pragma once

#include "nsb/dynamics.hpp"

#include <string>
#include <utility>
#include <vector>

namespace nsb {

struct RunOptions {
  std::string kernel = "auto";
  std::vector<double> N_list{10, 100, 1000};
  int census_M = 16;
  std::vector<int> census_shells{1, 2, 3};
  int grid = 0;  // physical reconstruction points per axis; 0 disables
  std::string table_cache;
};

struct ExperimentConfig {
  SimulationConfig sim;
  std::string init_kind = "random";
  InitSpec init;
  RunOptions run;
  std::vector<std::string> warnings;
};

using Override = std::pair<std::string, std::string>;
Override parse_override(const std::string& s);  // "section.key=value"

// Throws ConfigError naming the line (syntax) or the offending field.
ExperimentConfig parse_config(const std::string& text, const std::vector<Override>& overrides = {});
ExperimentConfig load_config(const std::string& path, const std::vector<Override>& overrides = {});

// Canonical INI text of the validated configuration; hashed into manifests.
std::string canonical_text(const ExperimentConfig& c);

}  // namespace nsb
