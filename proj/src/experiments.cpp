#include "nsb/experiments.hpp"

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#ifndef NSB_VERSION
#define NSB_VERSION "unknown"
#endif

namespace nsb {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string>& experiment_commands() {
  static const std::vector<std::string> c{"simulate", "limit",   "converge", "gamma-check",
                                          "resonance-census", "qg-equiv", "pancake"};
  return c;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Artifact sink: every file goes through here so the manifest lists it.
class Output {
 public:
  Output(const std::string& dir, std::uint64_t seed, std::string config_hash)
      : dir_(dir), seed_(seed), hash_(std::move(config_hash)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) throw IoError("cannot create output directory " + dir_.string());
  }

  void text(const std::string& name, const std::string& body) {
    std::ofstream f(dir_ / name, std::ios::binary);
    f << body;
    finish(f, name);
  }

  // CSV files open with a provenance comment line.
  void csv(const std::string& name, const std::string& body) {
    text(name, "# seed=" + std::to_string(seed_) + " config_hash=" + hash_ + "\n" + body);
  }

  void binary(const std::string& name, const std::vector<double>& data) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if constexpr (std::endian::native == std::endian::little) {
      f.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
    } else {
      for (double x : data) {
        auto u = std::bit_cast<std::uint64_t>(x);
        char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((u >> (8 * i)) & 0xff);
        f.write(b, 8);
      }
    }
    finish(f, name);
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::uint64_t seed_;
  std::string hash_;
  std::vector<std::string> files_;

  void finish(std::ofstream& f, const std::string& name) {
    f.close();
    if (!f) throw IoError("cannot write " + (dir_ / name).string());
    files_.push_back(name);
  }
};

void write_field(Output& out, const std::string& stem, const PhysicalField& f, double t, double N,
                 std::uint64_t seed) {
  std::vector<double> flat;
  flat.reserve(4 * f.data[0].size());
  for (const auto& comp : f.data) flat.insert(flat.end(), comp.begin(), comp.end());
  out.binary(stem + ".bin", flat);
  json side{{"format", "float64-le"},
            {"shape", {4, f.L, f.L, f.L}},
            {"components", {"u1", "u2", "u3", "rho"}},
            {"index", "((c * L + i1) * L + i2) * L + i3 at x = cell * (i1, i2, i3) / L"},
            {"cell", f.cell},
            {"t", t},
            {"N", N},
            {"seed", seed},
            {"max_imag_relative", f.max_imag_relative}};
  out.text(stem + ".json", side.dump(2) + "\n");
}

std::string diag_csv(const std::vector<DiagnosticsRecord>& d) {
  std::ostringstream os;
  os << "t,l1,energy,l12,anisotropy\n";
  for (const auto& r : d)
    os << format_double(r.t) << ',' << format_double(r.l1) << ',' << format_double(r.energy) << ','
       << format_double(r.l12) << ',' << format_double(r.anisotropy) << '\n';
  return os.str();
}

void prepare_table(Model& model, const ExperimentConfig& cfg) {
  if (cfg.run.table_cache.empty()) return;
  model.use_table(TriadTable::cached(cfg.run.table_cache, model.set(), model.frames(), {false}));
}

json run_trajectory(SystemKind system, const ExperimentSpec& spec, const ExperimentConfig& cfg, Output& out,
                    std::ostream& log) {
  Model model(cfg.sim);
  if (system == SystemKind::Limit) prepare_table(model, cfg);
  const AmplitudeState init = random_initial_state(model, cfg.sim, cfg.init, spec.seed);
  const double N = cfg.sim.N();
  log << "integrating " << (system == SystemKind::Full ? "full" : "limit") << " system, " << model.set().size()
      << " modes\n";
  const auto tr = integrate(system, model, cfg.sim, init, N);
  out.csv("trajectory.csv", diag_csv(tr.diagnostics));
  json final_state = state_json(model.set(), tr.snapshots.back());
  final_state["seed"] = spec.seed;
  out.text("final_state.json", final_state.dump() + "\n");
  if (cfg.run.grid > 0)
    write_field(out, "field_final", reconstruct_physical(model, tr.snapshots.back(), tr.times.back(), N, cfg.run.grid, cfg.sim),
                tr.times.back(), N, spec.seed);
  const auto& last = tr.diagnostics.back();
  return {{"modes", model.set().size()}, {"N", N}, {"l1_final", last.l1}, {"energy_final", last.energy}};
}

json run_converge(const ExperimentSpec& spec, const ExperimentConfig& cfg, Output& out, std::ostream& log) {
  Model model(cfg.sim);
  prepare_table(model, cfg);
  const AmplitudeState init = random_initial_state(model, cfg.sim, cfg.init, spec.seed);
  log << "convergence study over " << cfg.run.N_list.size() << " values of N\n";
  const auto res = convergence_study(model, cfg.sim, init, cfg.run.N_list);
  std::ostringstream table, series;
  table << "N,sup_remainder,ratio\n";
  json rows = json::array();
  for (const auto& r : res.rows) {
    table << format_double(r.N) << ',' << format_double(r.sup_remainder) << ',' << format_double(r.ratio) << '\n';
    rows.push_back({{"N", r.N}, {"sup_remainder", r.sup_remainder}});
  }
  series << "t";
  for (const auto& r : res.rows) series << ",N=" << format_double(r.N);
  series << '\n';
  for (std::size_t s = 0; s < res.times.size(); ++s) {
    series << format_double(res.times[s]);
    for (const auto& col : res.remainder) series << ',' << format_double(col[s]);
    series << '\n';
  }
  out.csv("converge.csv", table.str());
  out.csv("remainder_series.csv", series.str());
  return {{"rows", rows}};
}

json run_gamma(const ExperimentConfig& cfg, Output& out, std::ostream& log) {
  const FrequencySet set(cfg.sim.kind, cfg.sim.M, cfg.sim.dilation);
  log << "scanning " << set.size() << " modes for all-wave resonances\n";
  const auto report = gamma_scan(set);
  std::ostringstream os;
  write_csv(os, report);
  out.csv("gamma_check.csv", os.str());
  return {{"triads_scanned", report.triads_scanned},
          {"resonant_rows", report.rows.size()},
          {"generic_rows", report.generic_rows()},
          {"certified", report.certified()}};
}

json run_census(const ExperimentConfig& cfg, Output& out, std::ostream& log) {
  const FrequencySet set(cfg.sim.kind, cfg.run.census_M, cfg.sim.dilation);
  std::vector<CensusResult> rows;
  for (int shell : cfg.run.census_shells) {
    log << "census shell " << shell << "\n";
    try {
      rows.push_back(restricted_convolution_census(set, shell));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    } catch (const EmptyShell& e) {
      throw ConfigError(e.what());
    }
  }
  std::ostringstream os;
  write_csv(os, rows);
  out.csv("census.csv", os.str());
  json j = json::array();
  for (const auto& r : rows)
    j.push_back({{"shell", r.shell}, {"implied_constant", r.implied_constant}, {"max_fiber_count", r.max_fiber_count}});
  return {{"shells", j}};
}

json run_qg(const ExperimentSpec& spec, const ExperimentConfig& cfg, Output& out, std::ostream& log) {
  Model model(cfg.sim);
  const ScalarField theta0 = random_theta(model.set(), cfg.init, spec.seed);
  log << "twin QG / planar integration\n";
  const auto res = qg_equiv_check(model, cfg.sim, theta0);
  std::ostringstream os;
  os << "t,error\n";
  for (std::size_t i = 0; i < res.times.size(); ++i)
    os << format_double(res.times[i]) << ',' << format_double(res.errors[i]) << '\n';
  out.csv("qg_equiv.csv", os.str());
  return {{"max_error", res.max_error}};
}

json run_pancake(const ExperimentSpec& spec, const ExperimentConfig& cfg, Output& out, std::ostream& log) {
  Model model(cfg.sim);
  const AmplitudeState init = random_initial_state(model, cfg.sim, cfg.init, spec.seed);
  const double N = cfg.sim.N();
  SimulationConfig c0 = cfg.sim, cN = cfg.sim;
  cN.dt = std::min(cfg.sim.dt, model.dt_osc(N));
  log << "pancake run at N=0\n";
  const auto t0 = integrate(SystemKind::Full, model, c0, init, 0.0);
  log << "pancake run at N=" << format_double(N) << "\n";
  const auto tN = integrate(SystemKind::Full, model, cN, init, N);
  std::ostringstream os;
  os << "t,anisotropy_N0,anisotropy_N\n";
  for (std::size_t i = 0; i < t0.times.size(); ++i)
    os << format_double(t0.times[i]) << ',' << format_double(t0.diagnostics[i].anisotropy) << ','
       << format_double(tN.diagnostics[i].anisotropy) << '\n';
  out.csv("pancake.csv", os.str());
  if (cfg.run.grid > 0) {
    write_field(out, "field_N0", reconstruct_physical(model, t0.snapshots.back(), t0.times.back(), 0.0, cfg.run.grid, cfg.sim),
                t0.times.back(), 0.0, spec.seed);
    write_field(out, "field_N", reconstruct_physical(model, tN.snapshots.back(), tN.times.back(), N, cfg.run.grid, cfg.sim),
                tN.times.back(), N, spec.seed);
  }
  const double a0 = t0.diagnostics.back().anisotropy, aN = tN.diagnostics.back().anisotropy;
  return {{"N", N}, {"anisotropy_N0", a0}, {"anisotropy_N", aN}, {"stabilized", aN <= a0}};
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory<AmplitudeState>& tr) { os << diag_csv(tr.diagnostics); }

json state_json(const FrequencySet& set, const AmplitudeState& s) {
  json modes = json::array(), c = json::array();
  for (std::size_t i = 0; i < set.size(); ++i) {
    modes.push_back({set[i].n1, set[i].n2, set[i].n3});
    json triple = json::array();
    for (int sg = -1; sg <= 1; ++sg) {
      const cplx v = s.at(static_cast<int>(i), sg);
      triple.push_back({v.real(), v.imag()});
    }
    c.push_back(triple);
  }
  return {{"lattice", set.descriptor()}, {"t", s.t}, {"sigma_order", {-1, 0, 1}}, {"modes", modes}, {"c", c}};
}

ScalarField random_theta(const FrequencySet& set, const InitSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ScalarField th;
  th.theta.assign(set.size(), 0.0);
  double l1 = 0;
  for (std::size_t i = 0; i < set.size() / 2; ++i) {
    const auto& n = set[i];
    const double r2 = double(n.n1) * n.n1 + double(n.n2) * n.n2 + double(n.n3) * n.n3;
    if (r2 > spec.shell_max * spec.shell_max || set.horizontal_zero(static_cast<int>(i))) continue;
    const cplx z(normal(rng), normal(rng));
    th.theta[i] = z;
    th.theta[set.size() - 1 - i] = std::conj(z);
    l1 += 2 * std::abs(z);
  }
  if (l1 == 0) throw ConfigError("random theta is empty (check init.shell_max)");
  for (auto& x : th.theta) x *= spec.amplitude / l1;
  return th;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const ExperimentConfig& cfg, std::ostream& log) {
  try {
    kernels::set_active(kernels::isa_from_string(cfg.run.kernel));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("run.kernel: ") + e.what());
  }
  const std::string canon = canonical_text(cfg);
  const std::string hash = hex64(fnv1a(canon + "seed=" + std::to_string(spec.seed) + "\n"));
  Output out(spec.out_dir, spec.seed, hash);
  for (const auto& w : cfg.warnings) log << "warning: " << w << "\n";

  json summary;
  const std::string& cmd = spec.command;
  if (cmd == "simulate")
    summary = run_trajectory(SystemKind::Full, spec, cfg, out, log);
  else if (cmd == "limit")
    summary = run_trajectory(SystemKind::Limit, spec, cfg, out, log);
  else if (cmd == "converge")
    summary = run_converge(spec, cfg, out, log);
  else if (cmd == "gamma-check")
    summary = run_gamma(cfg, out, log);
  else if (cmd == "resonance-census")
    summary = run_census(cfg, out, log);
  else if (cmd == "qg-equiv")
    summary = run_qg(spec, cfg, out, log);
  else if (cmd == "pancake")
    summary = run_pancake(spec, cfg, out, log);
  else
    throw ConfigError("unknown command '" + cmd + "'");

  out.text("config.ini", canon);
  ExperimentResult res{out.files(), summary};
  json manifest{{"command", cmd},
                {"seed", spec.seed},
                {"config_hash", hash},
                {"code_version", NSB_VERSION},
                {"kernel", kernels::to_string(kernels::active())},
                {"warnings", cfg.warnings},
                {"summary", summary}};
  std::vector<std::string> listed = res.artifacts;
  listed.push_back("manifest.json");
  manifest["artifacts"] = listed;
  out.text("manifest.json", manifest.dump(2) + "\n");
  res.artifacts = listed;
  return res;
}

int run_cli(const ExperimentSpec& spec, std::ostream& log, std::ostream& err) {
  try {
    const ExperimentConfig cfg = load_config(spec.config_path, spec.overrides);
    const auto res = run_experiment(spec, cfg, log);
    log << res.summary.dump() << "\n";
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace nsb
