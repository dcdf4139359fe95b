#include "nsb/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Rotating stratified Boussinesq solver on dilated lattices"};
  app.require_subcommand(1);

  nsb::ExperimentSpec spec;
  std::vector<std::string> sets;
  for (const auto& name : nsb::experiment_commands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", spec.config_path, "INI configuration file")->required();
    sub->add_option("--out", spec.out_dir, "output directory");
    sub->add_option("--seed", spec.seed, "seed for random initial data");
    sub->add_option("--set", sets, "override section.key=value (repeatable)");
    sub->callback([&spec, name] { spec.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    for (const auto& s : sets) spec.overrides.push_back(nsb::parse_override(s));
  } catch (const nsb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  return nsb::run_cli(spec, std::cout, std::cerr);
}
