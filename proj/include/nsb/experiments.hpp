// Experiment drivers behind the command-line tool and their on-disk artifacts.
#pragma once

#include "nsb/config.hpp"

#include <json.hpp>

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace nsb {

struct ExperimentSpec {
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::vector<Override> overrides;
};

const std::vector<std::string>& experiment_commands();

struct ExperimentResult {
  std::vector<std::string> artifacts;  // file names relative to the output directory
  nlohmann::json summary;
};

// Runs one command and writes its artifacts plus manifest.json into spec.out_dir.
ExperimentResult run_experiment(const ExperimentSpec& spec, const ExperimentConfig& cfg, std::ostream& log);

// Loads the config, runs, and maps failures to exit codes (config 2, numeric 3, io 4).
int run_cli(const ExperimentSpec& spec, std::ostream& log, std::ostream& err);

// Writers shared with tests.
void write_trajectory_csv(std::ostream& os, const Trajectory<AmplitudeState>& tr);
nlohmann::json state_json(const FrequencySet& set, const AmplitudeState& s);
std::string format_double(double x);  // %.17g

// Real theta on the modes with nonzero horizontal part, |n| <= shell_max, l1-normalized.
ScalarField random_theta(const FrequencySet& set, const InitSpec& spec, std::uint64_t seed);

}  // namespace nsb
