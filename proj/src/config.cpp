#include "nsb/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace nsb {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"physics", {"nu", "kappa", "g", "calN", "qg_unit_diffusion"}},
      {"lattice", {"kind", "M", "g1sq", "g2sq"}},
      {"time", {"T", "dt", "sample_dt"}},
      {"init", {"kind", "shell_max", "amplitude", "rho_scale", "sector"}},
      {"run", {"kernel", "keep_cancelling_pair", "limit_all_resonant", "N_list", "census_M", "census_shells", "grid", "table_cache"}},
      {"tolerances", {"divergence", "reality"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  const auto e = s.find_last_not_of(" \t\r\"");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& key) const {
    const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    if (!v) return std::nullopt;
    return trim(*v);
  }

  double number(const std::string& key, double def) const {
    const auto v = raw(key);
    return v ? to_number(key, *v) : def;
  }

  int integer(const std::string& key, int def) const {
    const auto v = raw(key);
    if (!v) return def;
    int out = 0;
    const auto r = std::from_chars(v->data(), v->data() + v->size(), out);
    if (r.ec != std::errc{} || r.ptr != v->data() + v->size())
      throw ConfigError(key + ": expected an integer, got '" + *v + "'");
    return out;
  }

  bool boolean(const std::string& key, bool def) const {
    const auto v = raw(key);
    if (!v) return def;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + *v + "'");
  }

  std::string text(const std::string& key, const std::string& def) const { return raw(key).value_or(def); }

  Rational rational(const std::string& key, const Rational& def) const {
    const auto v = raw(key);
    if (!v) return def;
    try {
      return exact::parse_rational(*v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key + ": " + e.what());
    }
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& def) const {
    const auto v = raw(key);
    if (!v) return def;
    std::vector<double> out;
    for (const auto& item : split(*v)) out.push_back(to_number(key, item));
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
  }

 private:
  const pt::ptree& tree_;

  static double to_number(const std::string& key, const std::string& s) {
    double out = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
      throw ConfigError(key + ": expected a number, got '" + s + "'");
    return out;
  }

  static std::vector<std::string> split(std::string s) {
    for (char& ch : s)
      if (ch == '[' || ch == ']') ch = ' ';
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!trim(item).empty()) out.push_back(trim(item));
    return out;
  }
};

void check_keys(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError("unknown section [" + section + "]");
    if (!body.data().empty()) throw ConfigError("key '" + section + "' outside any section");
    for (const auto& [key, value] : body)
      if (!it->second.count(key)) throw ConfigError("unknown key " + section + "." + key);
  }
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field + ": " + what);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Override parse_override(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + s + "' is not section.key=value");
  const std::string key = trim(s.substr(0, eq));
  const auto dot = key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == key.size())
    throw ConfigError("override key '" + key + "' is not section.key");
  return {key, trim(s.substr(eq + 1))};
}

ExperimentConfig parse_config(const std::string& text, const std::vector<Override>& overrides) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config parse error at line " + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [key, value] : overrides) tree.put(pt::ptree::path_type(key, '.'), value);
  check_keys(tree);

  const Reader r(tree);
  ExperimentConfig c;
  SimulationConfig& s = c.sim;

  s.nu = r.number("physics.nu", s.nu);
  s.kappa = r.number("physics.kappa", s.kappa);
  s.g = r.number("physics.g", s.g);
  s.calN = r.number("physics.calN", s.calN);
  s.qg_unit_diffusion = r.boolean("physics.qg_unit_diffusion", s.qg_unit_diffusion);
  require(s.nu > 0, "physics.nu", "must be > 0");
  require(s.kappa >= 0, "physics.kappa", "must be >= 0");
  require(s.g > 0, "physics.g", "must be > 0");
  require(s.calN > 0, "physics.calN", "must be > 0");
  if (s.N() <= s.g)
    c.warnings.push_back("N = calN*sqrt(g) = " + fmt(s.N()) + " does not exceed g = " + fmt(s.g));

  try {
    s.kind = lattice_kind_from_string(r.text("lattice.kind", "cubic"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("lattice.kind: ") + e.what());
  }
  s.M = r.integer("lattice.M", s.M);
  require(s.M >= 1 && s.M <= 64, "lattice.M", "must be in [1, 64]");
  const Rational g1 = r.rational("lattice.g1sq", Rational(1));
  const Rational g2 = r.rational("lattice.g2sq", Rational(1));
  require(g1 > 0, "lattice.g1sq", "must be > 0");
  require(g2 > 0, "lattice.g2sq", "must be > 0");
  s.dilation = DilationFactors(g1, g2);

  s.T = r.number("time.T", s.T);
  s.dt = r.number("time.dt", s.dt);
  s.sample_dt = r.number("time.sample_dt", s.sample_dt);
  require(s.T > 0, "time.T", "must be > 0");
  require(s.dt > 0, "time.dt", "must be > 0");
  require(s.sample_dt >= 0, "time.sample_dt", "must be >= 0");
  try {
    make_time_grid(s.T, s.dt, s.sample_dt);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("time.sample_dt: ") + e.what());
  }

  c.init_kind = r.text("init.kind", c.init_kind);
  require(c.init_kind == "random", "init.kind", "only 'random' is supported");
  c.init.shell_max = r.number("init.shell_max", c.init.shell_max);
  c.init.amplitude = r.number("init.amplitude", c.init.amplitude);
  c.init.rho_scale = r.number("init.rho_scale", c.init.rho_scale);
  c.init.sector = r.text("init.sector", c.init.sector);
  require(c.init.shell_max >= 1, "init.shell_max", "must be >= 1");
  require(c.init.amplitude > 0, "init.amplitude", "must be > 0");
  require(c.init.rho_scale >= 0, "init.rho_scale", "must be >= 0");
  require(c.init.sector == "all" || c.init.sector == "vortex" || c.init.sector == "wave", "init.sector",
          "must be all, vortex or wave");

  RunOptions& run = c.run;
  run.kernel = r.text("run.kernel", run.kernel);
  require(run.kernel == "auto" || run.kernel == "scalar" || run.kernel == "avx2", "run.kernel",
          "must be auto, scalar or avx2");
  s.keep_cancelling_pair = r.boolean("run.keep_cancelling_pair", s.keep_cancelling_pair);
  s.limit_all_resonant = r.boolean("run.limit_all_resonant", s.limit_all_resonant);
  run.N_list = r.numbers("run.N_list", run.N_list);
  for (std::size_t i = 0; i < run.N_list.size(); ++i) {
    require(run.N_list[i] > 0, "run.N_list", "entries must be > 0");
    require(i == 0 || run.N_list[i] > run.N_list[i - 1], "run.N_list", "must be strictly increasing");
  }
  run.census_M = r.integer("run.census_M", run.census_M);
  require(run.census_M >= 2, "run.census_M", "must be >= 2");
  run.census_shells.clear();
  for (double x : r.numbers("run.census_shells", {1, 2, 3})) {
    require(x >= 1 && x == static_cast<int>(x), "run.census_shells", "entries must be positive integers");
    run.census_shells.push_back(static_cast<int>(x));
  }
  run.grid = r.integer("run.grid", run.grid);
  require(run.grid == 0 || run.grid >= 2 * s.M + 1, "run.grid", "must be 0 or >= 2M+1");
  run.table_cache = r.text("run.table_cache", run.table_cache);

  s.tol.divergence = r.number("tolerances.divergence", s.tol.divergence);
  s.tol.reality = r.number("tolerances.reality", s.tol.reality);
  require(s.tol.divergence > 0, "tolerances.divergence", "must be > 0");
  require(s.tol.reality > 0, "tolerances.reality", "must be > 0");
  return c;
}

ExperimentConfig load_config(const std::string& path, const std::vector<Override>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string canonical_text(const ExperimentConfig& c) {
  const SimulationConfig& s = c.sim;
  std::ostringstream os;
  const auto list = [](const auto& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(static_cast<double>(v[i]));
    return out;
  };
  os << "[physics]\nnu=" << fmt(s.nu) << "\nkappa=" << fmt(s.kappa) << "\ng=" << fmt(s.g) << "\ncalN=" << fmt(s.calN)
     << "\nqg_unit_diffusion=" << (s.qg_unit_diffusion ? "true" : "false") << "\n";
  os << "[lattice]\nkind=" << to_string(s.kind) << "\nM=" << s.M << "\ng1sq=" << exact::to_string(s.dilation.g1sq)
     << "\ng2sq=" << exact::to_string(s.dilation.g2sq) << "\n";
  os << "[time]\nT=" << fmt(s.T) << "\ndt=" << fmt(s.dt) << "\nsample_dt=" << fmt(s.sample_dt) << "\n";
  os << "[init]\nkind=" << c.init_kind << "\nshell_max=" << fmt(c.init.shell_max)
     << "\namplitude=" << fmt(c.init.amplitude) << "\nrho_scale=" << fmt(c.init.rho_scale)
     << "\nsector=" << c.init.sector << "\n";
  os << "[run]\nkernel=" << c.run.kernel << "\nkeep_cancelling_pair=" << (s.keep_cancelling_pair ? "true" : "false")
     << "\nlimit_all_resonant=" << (s.limit_all_resonant ? "true" : "false")
     << "\nN_list=" << list(c.run.N_list) << "\ncensus_M=" << c.run.census_M
     << "\ncensus_shells=" << list(c.run.census_shells) << "\ngrid=" << c.run.grid
     << "\ntable_cache=" << c.run.table_cache << "\n";
  os << "[tolerances]\ndivergence=" << fmt(s.tol.divergence) << "\nreality=" << fmt(s.tol.reality) << "\n";
  return os.str();
}

}  // namespace nsb
