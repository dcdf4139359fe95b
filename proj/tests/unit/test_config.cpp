#include "nsb/config.hpp"
#include "nsb/experiments.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nsb;

namespace {

const char* kBase = R"([physics]
nu = 0.1
kappa = 0.2
g = 1
calN = 10

[lattice]
kind = oblique_b
M = 2
g1sq = 2/1
g2sq = 1.5

[time]
T = 0.1
dt = 0.001
sample_dt = 0.05
)";

std::string message_of(const std::string& text, const std::vector<Override>& o = {}) {
  try {
    parse_config(text, o);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parse a config") {
  const ExperimentConfig c = parse_config(kBase);
  CHECK(c.sim.nu == 0.1);
  CHECK(c.sim.kappa == 0.2);
  CHECK(c.sim.N() == 10.0);
  CHECK(c.sim.kind == LatticeKind::ObliqueB);
  CHECK(c.sim.dilation.g1sq == Rational(2));
  CHECK(c.sim.dilation.g2sq == Rational(3, 2));
  CHECK(c.sim.sample_dt == 0.05);
  CHECK(c.warnings.empty());
  CHECK(c.run.kernel == "auto");
}

TEST_CASE("invalid values are rejected with the field named") {
  CHECK(message_of(kBase, {{"physics.nu", "0"}}).find("physics.nu") != std::string::npos);
  CHECK(message_of(kBase, {{"physics.kappa", "0"}}).empty());
  CHECK(message_of(kBase, {{"lattice.g1sq", "-1"}}).find("lattice.g1sq") != std::string::npos);
  CHECK(message_of(kBase, {{"lattice.g1sq", "1/0"}}).find("lattice.g1sq") != std::string::npos);
  CHECK(message_of(kBase, {{"lattice.kind", "hexagonal"}}).find("lattice.kind") != std::string::npos);
  CHECK(message_of(kBase, {{"lattice.M", "x"}}).find("lattice.M") != std::string::npos);
  CHECK(message_of(kBase, {{"time.sample_dt", "0.03"}}).find("time.sample_dt") != std::string::npos);
  CHECK(message_of(kBase, {{"run.kernel", "gpu"}}).find("run.kernel") != std::string::npos);
  CHECK(message_of(kBase, {{"run.N_list", "10,5"}}).find("run.N_list") != std::string::npos);
  CHECK(message_of(kBase, {{"run.grid", "3"}}).find("run.grid") != std::string::npos);
  CHECK(message_of(kBase, {{"init.sector", "shear"}}).find("init.sector") != std::string::npos);
  CHECK(message_of(std::string(kBase) + "typo = 1\n").find("time.typo") != std::string::npos);
  CHECK(message_of(std::string(kBase) + "[extra]\nx = 1\n").find("extra") != std::string::npos);
}

TEST_CASE("syntax errors report the line") {
  const std::string msg = message_of("[physics]\nnu = 0.1\n[broken\n");
  CHECK(msg.find("line 3") != std::string::npos);
}

TEST_CASE("weak stratification is a warning") {
  const ExperimentConfig c = parse_config(kBase, {{"physics.calN", "0.5"}, {"physics.g", "4"}});
  CHECK(c.sim.N() == 1.0);
  REQUIRE(c.warnings.size() == 1);
  CHECK(c.warnings[0].find("does not exceed") != std::string::npos);
}

TEST_CASE("overrides") {
  const Override o = parse_override("run.N_list = 1, 2, 4");
  CHECK(o.first == "run.N_list");
  CHECK(o.second == "1, 2, 4");
  CHECK_THROWS_AS(parse_override("nokey"), ConfigError);
  CHECK_THROWS_AS(parse_override("flat=1"), ConfigError);
  const ExperimentConfig c = parse_config(kBase, {o, parse_override("lattice.M=3")});
  CHECK(c.run.N_list == std::vector<double>{1, 2, 4});
  CHECK(c.sim.M == 3);
}

TEST_CASE("canonical text parses back to the same config") {
  const ExperimentConfig c = parse_config(kBase, {{"run.census_shells", "1,2"}, {"init.sector", "vortex"}});
  const ExperimentConfig d = parse_config(canonical_text(c));
  CHECK(canonical_text(d) == canonical_text(c));
  CHECK(d.sim.dilation == c.sim.dilation);
  CHECK(d.run.census_shells == std::vector<int>{1, 2});
}

TEST_CASE("missing file is an io error") {
  CHECK_THROWS_AS(load_config("/nonexistent/nsb.ini"), IoError);
}

TEST_CASE("gamma-check writes its report and a manifest") {
  const auto dir = std::filesystem::temp_directory_path() / "nsb_config_test";
  std::filesystem::remove_all(dir);
  ExperimentSpec spec;
  spec.command = "gamma-check";
  spec.out_dir = dir.string();
  std::ostringstream log;
  const ExperimentConfig cfg = parse_config(kBase, {{"lattice.kind", "cubic"}, {"lattice.g2sq", "1"}});
  const ExperimentResult r = run_experiment(spec, cfg, log);
  CHECK(std::filesystem::exists(dir / "gamma_check.csv"));
  CHECK(std::filesystem::exists(dir / "manifest.json"));
  std::ifstream in(dir / "manifest.json");
  const auto m = nlohmann::json::parse(in);
  CHECK(m["command"] == "gamma-check");
  CHECK(m["artifacts"].size() == r.artifacts.size());
  std::filesystem::remove_all(dir);
}
