#include "nsb/dynamics.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace nsb {

namespace {
constexpr cplx I{0.0, 1.0};

std::string time_str(double t) {
  std::ostringstream os;
  os.precision(10);
  os << t;
  return os.str();
}

void check_finite(const std::vector<cplx>& u, double t) {
  for (const cplx& x : u)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      throw NumericError("non-finite state at t=" + time_str(t));
}

using Nonlinear = std::function<void(double, const std::vector<cplx>&, std::vector<cplx>&)>;

// Integrating-factor RK4 for u' = -rate * u + F(t, u) with the linear part exact.
class LawsonRK4 {
 public:
  LawsonRK4(std::vector<double> rate, double h) : rate_(std::move(rate)), h_(h) {
    e1_.resize(rate_.size());
    e2_.resize(rate_.size());
    for (std::size_t i = 0; i < rate_.size(); ++i) {
      e1_[i] = std::exp(-rate_[i] * h);
      e2_[i] = std::exp(-rate_[i] * h / 2);
    }
    const std::size_t n = rate_.size();
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &y_}) v->resize(n);
  }

  void step(std::vector<cplx>& u, double t, const Nonlinear& F) {
    const double h = h_;
    const std::size_t n = u.size();
    F(t, u, k1_);
    for (std::size_t i = 0; i < n; ++i) y_[i] = e2_[i] * (u[i] + 0.5 * h * k1_[i]);
    F(t + 0.5 * h, y_, k2_);
    for (std::size_t i = 0; i < n; ++i) y_[i] = e2_[i] * u[i] + 0.5 * h * k2_[i];
    F(t + 0.5 * h, y_, k3_);
    for (std::size_t i = 0; i < n; ++i) y_[i] = e1_[i] * u[i] + h * e2_[i] * k3_[i];
    F(t + h, y_, k4_);
    for (std::size_t i = 0; i < n; ++i)
      u[i] = e1_[i] * u[i] + (h / 6.0) * (e1_[i] * k1_[i] + 2.0 * e2_[i] * (k2_[i] + k3_[i]) + k4_[i]);
  }

 private:
  std::vector<double> rate_, e1_, e2_;
  double h_;
  std::vector<cplx> k1_, k2_, k3_, k4_, y_;
};

// Runs a flat system over the sample grid, calling observe(t, u) at every sample.
void drive(const std::vector<double>& rate, const TimeGrid& grid, std::vector<cplx>& u, const Nonlinear& F,
           const std::function<bool(double, const std::vector<cplx>&)>& observe) {
  LawsonRK4 rk(rate, grid.h);
  double t = 0.0;
  if (!observe(t, u)) return;
  for (int s = 0; s < grid.samples; ++s) {
    for (int j = 0; j < grid.substeps; ++j) {
      rk.step(u, t, F);
      t = (static_cast<double>(s) * grid.substeps + j + 1) * grid.h;
      check_finite(u, t);
    }
    if (!observe(t, u)) return;
  }
}

double mu_qg(const SimulationConfig& cfg) { return cfg.qg_unit_diffusion ? 1.0 : cfg.nu; }

double hnorm(const FrequencySet& set, int i) { return std::sqrt(set.hsq(i)); }

}  // namespace

double SimulationConfig::N() const { return calN * std::sqrt(g); }

// ---- model ----

Model::Model(const SimulationConfig& cfg) : Model(cfg.kind, cfg.M, cfg.dilation) {}

Model::Model(LatticeKind kind, int M, const DilationFactors& d) : set_(kind, M, d), frames_(frame_cache(set_)) {
  for_each_triad(set_, [&](int n, int k, int m) {
    omega_max_ = std::max(omega_max_, set_.omega(n) + set_.omega(k) + set_.omega(m));
  });
}

const TriadTable& Model::table(bool with_nonresonant) {
  if (!table_ || (with_nonresonant && !table_->has_nonresonant()))
    table_ = TriadTable::build(set_, frames_, {with_nonresonant});
  return *table_;
}

void Model::use_table(TriadTable t) {
  if (t.set_hash() != set_.hash()) throw std::invalid_argument("triad table belongs to another lattice");
  table_ = std::move(t);
}

DirectConvolution& Model::direct() {
  if (!direct_) direct_ = std::make_unique<DirectConvolution>(set_, frames_);
  direct_->set_isa(kernels::active());
  return *direct_;
}

double Model::omega_max() const { return omega_max_; }

double Model::dt_osc(double N) const {
  if (N == 0.0 || omega_max_ == 0.0) return std::numeric_limits<double>::infinity();
  return 0.2 / (std::abs(N) * omega_max_);
}

const std::vector<Model::QgEntry>& Model::qg_entries() {
  if (qg_.empty()) {
    for_each_triad(set_, [&](int n, int k, int m) {
      if (set_.horizontal_zero(n) || set_.horizontal_zero(k) || set_.horizontal_zero(m)) return;
      const auto& kv = set_.wavevector(k);
      const auto& mv = set_.wavevector(m);
      const double cross = kv[0] * mv[1] - kv[1] * mv[0];
      if (cross == 0.0) return;
      qg_.push_back({n, k, m, cross * hnorm(set_, m) / (hnorm(set_, k) * hnorm(set_, n))});
    });
  }
  return qg_;
}

const std::vector<Triad>& Model::planar_triads() {
  if (!planar_ready_) {
    for_each_triad(set_, [&](int n, int k, int m) {
      if (set_.horizontal_zero(n) || set_.horizontal_zero(k) || set_.horizontal_zero(m)) return;
      planar_.push_back({n, k, m});
    });
    planar_ready_ = true;
  }
  return planar_;
}

TimeGrid make_time_grid(double T, double dt, double sample_dt) {
  if (!(T > 0) || !(dt > 0)) throw ConfigError("T and dt must be positive");
  TimeGrid g;
  if (sample_dt <= 0 || sample_dt >= T) {
    g.samples = 1;
    g.substeps = static_cast<int>(std::ceil(T / dt - 1e-9));
    g.h = T / g.substeps;
    return g;
  }
  g.samples = static_cast<int>(std::llround(T / sample_dt));
  if (std::abs(g.samples * sample_dt - T) > 1e-9 * T)
    throw ConfigError("sample_dt must divide T (T=" + time_str(T) + ", sample_dt=" + time_str(sample_dt) + ")");
  g.substeps = static_cast<int>(std::ceil(sample_dt / dt - 1e-9));
  g.h = sample_dt / g.substeps;
  return g;
}

// ---- nonlinear operators ----

void nonlinear_qg(Model& model, const ScalarField& theta, std::vector<cplx>& out) {
  out.assign(theta.theta.size(), 0.0);
  for (const auto& e : model.qg_entries()) out[e.n] += e.K * theta.theta[e.k] * theta.theta[e.m];
}

void nonlinear_ns2d(Model& model, const PlanarField& w, std::vector<std::array<cplx, 2>>& out) {
  const FrequencySet& set = model.set();
  out.assign(w.w.size(), {cplx{}, cplx{}});
  for (const auto& t : model.planar_triads()) {
    const auto& mv = set.wavevector(t.m);
    const cplx s = I * (w.w[t.k][0] * mv[0] + w.w[t.k][1] * mv[1]);
    out[t.n][0] += s * w.w[t.m][0];
    out[t.n][1] += s * w.w[t.m][1];
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (set.horizontal_zero(static_cast<int>(i))) {
      out[i] = {cplx{}, cplx{}};
      continue;
    }
    const auto& k = set.wavevector(static_cast<int>(i));
    const double h2 = k[0] * k[0] + k[1] * k[1];
    const cplx proj = (k[0] * out[i][0] + k[1] * out[i][1]) / h2;
    out[i] = {-(out[i][0] - k[0] * proj), -(out[i][1] - k[1] * proj)};
  }
}

// ---- integration ----

namespace {

std::vector<double> amplitude_rates(const FrequencySet& set, const PhysicalParams& p) {
  std::vector<double> r(3 * set.size());
  for (std::size_t i = 0; i < set.size(); ++i)
    for (int s = -1; s <= 1; ++s) r[3 * i + s + 1] = p.mu(s) * set.fsq(static_cast<int>(i));
  return r;
}

Nonlinear amplitude_nonlinear(SystemKind system, Model& model, const SimulationConfig& cfg, double N,
                              bool hermitian) {
  if (system == SystemKind::Full) {
    DirectConvolution* dc = &model.direct();
    return [dc, N, hermitian](double t, const std::vector<cplx>& u, std::vector<cplx>& out) {
      AmplitudeState s;
      s.c = u;
      dc->nonlinear(s, t, N, out, hermitian);
    };
  }
  if (system != SystemKind::Limit) throw std::invalid_argument("amplitude integration supports Full and Limit");
  const TriadTable* table = &model.table();
  const auto w = cfg.limit_all_resonant ? weights_all() : weights_limit(cfg.keep_cancelling_pair);
  return [table, w](double, const std::vector<cplx>& u, std::vector<cplx>& out) {
    AmplitudeState s;
    s.c = u;
    out = bbar_all(*table, s, s, w);
  };
}

void run_amplitude(SystemKind system, Model& model, const SimulationConfig& cfg, const AmplitudeState& init,
                   double N, const std::function<bool(double, const std::vector<cplx>&)>& observe) {
  if (init.modes() != model.set().size()) throw std::invalid_argument("initial state is not on the model lattice");
  const TimeGrid grid = make_time_grid(cfg.T, cfg.dt, cfg.sample_dt);
  if (system == SystemKind::Full && grid.h > model.dt_osc(N) * (1 + 1e-12))
    throw ConfigError("dt=" + time_str(grid.h) + " exceeds the oscillation bound " + time_str(model.dt_osc(N)) +
                      " for N=" + time_str(N));
  bool hermitian = false;
  if (system == SystemKind::Full) {
    const auto v = physical_coefficients(model.set(), model.frames(), init, 0.0, N);
    hermitian = reality_defect(model.set(), v) <= 1e-12;
  }
  std::vector<cplx> u = init.c;
  drive(amplitude_rates(model.set(), cfg.params(N)), grid, u, amplitude_nonlinear(system, model, cfg, N, hermitian),
        observe);
}

}  // namespace

Trajectory<AmplitudeState> integrate(SystemKind system, Model& model, const SimulationConfig& cfg,
                                     const AmplitudeState& init, std::optional<double> N_opt) {
  const double N = system == SystemKind::Full ? N_opt.value_or(cfg.N()) : 0.0;
  const double N_diag = N_opt.value_or(cfg.N());
  Trajectory<AmplitudeState> tr;
  run_amplitude(system, model, cfg, init, N, [&](double t, const std::vector<cplx>& u) {
    AmplitudeState s(model.set().size(), t);
    s.c = u;
    tr.times.push_back(t);
    tr.diagnostics.push_back(diagnostics(model, s, t, N_diag));
    tr.snapshots.push_back(std::move(s));
    return true;
  });
  return tr;
}

Trajectory<ScalarField> integrate_qg(Model& model, const SimulationConfig& cfg, const ScalarField& init) {
  const FrequencySet& set = model.set();
  if (init.theta.size() != set.size()) throw std::invalid_argument("theta is not on the model lattice");
  for (std::size_t i = 0; i < set.size(); ++i)
    if (set.horizontal_zero(static_cast<int>(i)) && init.theta[i] != 0.0)
      throw std::invalid_argument("theta must vanish on modes with zero horizontal part");
  std::vector<double> rate(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) rate[i] = mu_qg(cfg) * set.fsq(static_cast<int>(i));
  Trajectory<ScalarField> tr;
  std::vector<cplx> u = init.theta;
  ScalarField tmp;
  drive(
      rate, make_time_grid(cfg.T, cfg.dt, cfg.sample_dt), u,
      [&](double, const std::vector<cplx>& x, std::vector<cplx>& out) {
        tmp.theta = x;
        nonlinear_qg(model, tmp, out);
      },
      [&](double t, const std::vector<cplx>& x) {
        tr.times.push_back(t);
        tr.snapshots.push_back({x});
        double l1 = 0, e = 0;
        for (const cplx& v : x) {
          l1 += std::abs(v);
          e += std::norm(v);
        }
        tr.diagnostics.push_back({t, l1, e, 0.0, 0.0});
        return true;
      });
  return tr;
}

Trajectory<PlanarField> integrate_ns2d(Model& model, const SimulationConfig& cfg, const PlanarField& init) {
  const FrequencySet& set = model.set();
  if (init.w.size() != set.size()) throw std::invalid_argument("w is not on the model lattice");
  std::vector<double> rate(2 * set.size());
  for (std::size_t i = 0; i < set.size(); ++i) rate[2 * i] = rate[2 * i + 1] = mu_qg(cfg) * set.fsq(static_cast<int>(i));
  std::vector<cplx> u(2 * set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    u[2 * i] = init.w[i][0];
    u[2 * i + 1] = init.w[i][1];
  }
  const auto unflat = [&](const std::vector<cplx>& x) {
    PlanarField p;
    p.w.resize(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) p.w[i] = {x[2 * i], x[2 * i + 1]};
    return p;
  };
  Trajectory<PlanarField> tr;
  std::vector<std::array<cplx, 2>> nl;
  drive(
      rate, make_time_grid(cfg.T, cfg.dt, cfg.sample_dt), u,
      [&](double, const std::vector<cplx>& x, std::vector<cplx>& out) {
        nonlinear_ns2d(model, unflat(x), nl);
        out.resize(x.size());
        for (std::size_t i = 0; i < nl.size(); ++i) {
          out[2 * i] = nl[i][0];
          out[2 * i + 1] = nl[i][1];
        }
      },
      [&](double t, const std::vector<cplx>& x) {
        tr.times.push_back(t);
        tr.snapshots.push_back(unflat(x));
        double l1 = 0, e = 0;
        for (const cplx& v : x) {
          l1 += std::abs(v);
          e += std::norm(v);
        }
        tr.diagnostics.push_back({t, l1, e, 0.0, 0.0});
        return true;
      });
  return tr;
}

// ---- theta / w ----

ScalarField theta_from_w(const FrequencySet& set, const PlanarField& w) {
  ScalarField th;
  th.theta.resize(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set.horizontal_zero(static_cast<int>(i))) {
      if (w.w[i][0] != 0.0 || w.w[i][1] != 0.0)
        throw std::invalid_argument("w has amplitude on mode " + to_string(set[i]) + " with zero horizontal part");
      continue;
    }
    const auto& k = set.wavevector(static_cast<int>(i));
    th.theta[i] = (I * k[1] * w.w[i][0] - I * k[0] * w.w[i][1]) / hnorm(set, static_cast<int>(i));
  }
  return th;
}

PlanarField w_from_theta(const FrequencySet& set, const ScalarField& theta) {
  PlanarField w;
  w.w.resize(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set.horizontal_zero(static_cast<int>(i))) {
      if (theta.theta[i] != 0.0)
        throw std::invalid_argument("theta has amplitude on mode " + to_string(set[i]) + " with zero horizontal part");
      continue;
    }
    const auto& k = set.wavevector(static_cast<int>(i));
    const double h = hnorm(set, static_cast<int>(i));
    w.w[i] = {-I * k[1] / h * theta.theta[i], I * k[0] / h * theta.theta[i]};
  }
  return w;
}

ScalarField theta_from_c0(const FrequencySet& set, const AmplitudeState& state) {
  ScalarField th;
  th.theta.resize(set.size());
  for (std::size_t i = 0; i < set.size(); ++i)
    if (!set.horizontal_zero(static_cast<int>(i))) th.theta[i] = -I * state.at(static_cast<int>(i), 0);
  return th;
}

AmplitudeState c0_from_theta(const FrequencySet& set, const ScalarField& theta) {
  AmplitudeState s(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) s.at(static_cast<int>(i), 0) = I * theta.theta[i];
  return s;
}

QgEquivResult qg_equiv_check(Model& model, const SimulationConfig& cfg, const ScalarField& theta0) {
  const auto qg = integrate_qg(model, cfg, theta0);
  const auto ns = integrate_ns2d(model, cfg, w_from_theta(model.set(), theta0));
  QgEquivResult r;
  for (std::size_t s = 0; s < qg.times.size(); ++s) {
    const ScalarField th = theta_from_w(model.set(), ns.snapshots[s]);
    double e = 0;
    for (std::size_t i = 0; i < th.theta.size(); ++i) e += std::abs(qg.snapshots[s].theta[i] - th.theta[i]);
    r.times.push_back(qg.times[s]);
    r.errors.push_back(e);
    r.max_error = std::max(r.max_error, e);
  }
  return r;
}

// ---- initial data ----

AmplitudeState initial_state_from_physical(const Model& model, const std::vector<Vec3c>& u0hat,
                                           const std::vector<cplx>& rho0hat, const SimulationConfig& cfg) {
  const FrequencySet& set = model.set();
  if (u0hat.size() != set.size() || rho0hat.size() != set.size())
    throw std::invalid_argument("initial data is not on the model lattice");
  const double scale = std::sqrt(cfg.g) / cfg.calN;
  AmplitudeState s(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Vec4c v{u0hat[i][0], u0hat[i][1], u0hat[i][2], scale * rho0hat[i]};
    const Vec4c pv = nsb::apply(extended_leray(set.wavevector(static_cast<int>(i))), v);
    const std::string label = to_string(set[i]);
    const WaveAmplitudes a = decompose(pv, model.frames()[i], cfg.tol.divergence, label.c_str());
    for (int sg = -1; sg <= 1; ++sg) s.at(static_cast<int>(i), sg) = a[sg];
  }
  return s;
}

AmplitudeState random_initial_state(const Model& model, const SimulationConfig& cfg, const InitSpec& spec,
                                    std::uint64_t seed) {
  const FrequencySet& set = model.set();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto draw = [&] { return cplx(normal(rng), normal(rng)); };
  std::vector<Vec3c> u(set.size());
  std::vector<cplx> rho(set.size());
  const std::size_t half = set.size() / 2;
  for (std::size_t i = 0; i < half; ++i) {
    const auto& n = set[i];
    const double r2 = double(n.n1) * n.n1 + double(n.n2) * n.n2 + double(n.n3) * n.n3;
    if (r2 > spec.shell_max * spec.shell_max) continue;
    const std::size_t j = set.size() - 1 - i;
    for (int c = 0; c < 3; ++c) {
      u[i][c] = draw();
      u[j][c] = std::conj(u[i][c]);
    }
    rho[i] = spec.rho_scale * draw();
    rho[j] = std::conj(rho[i]);
  }
  // density enters through the scaled fourth component; draw it at unit scale
  SimulationConfig unit = cfg;
  unit.g = 1.0;
  unit.calN = 1.0;
  AmplitudeState s = initial_state_from_physical(model, u, rho, unit);
  if (spec.sector != "all") {
    const bool keep_vortex = spec.sector == "vortex";
    if (!keep_vortex && spec.sector != "wave") throw ConfigError("init.sector must be all, vortex or wave");
    for (std::size_t i = 0; i < set.size(); ++i)
      for (int sg = -1; sg <= 1; ++sg)
        if ((sg == 0) != keep_vortex) s.at(static_cast<int>(i), sg) = 0.0;
  }
  const double l1 = ell1(s);
  if (l1 == 0.0) throw ConfigError("random initial state is empty (check init.shell_max)");
  for (auto& x : s.c) x *= spec.amplitude / l1;
  return s;
}

// ---- reconstruction ----

PhysicalField reconstruct_physical(const Model& model, const AmplitudeState& state, double t, double N, int L,
                                   const SimulationConfig& cfg) {
  const FrequencySet& set = model.set();
  const int M = set.M(), D = set.side();
  if (L < D) throw std::invalid_argument("grid " + std::to_string(L) + " too coarse for M=" + std::to_string(M));
  const auto vhat = physical_coefficients(set, model.frames(), state, t, N);

  std::vector<cplx> tw(static_cast<std::size_t>(L) * D);  // e^{2 pi i j a / L}
  for (int j = 0; j < L; ++j)
    for (int a = -M; a <= M; ++a)
      tw[static_cast<std::size_t>(j) * D + (a + M)] = std::polar(1.0, 2.0 * std::numbers::pi * j * a / L);

  PhysicalField out;
  out.L = L;
  const std::size_t cells = static_cast<std::size_t>(L) * L * L;
  const double rho_factor = cfg.calN / std::sqrt(cfg.g);
  double max_re = 0.0, max_im = 0.0;
  for (int c = 0; c < 4; ++c) {
    std::vector<cplx> C(static_cast<std::size_t>(D) * D * D);
    for (std::size_t i = 0; i < set.size(); ++i) C[set.cube_offset(static_cast<int>(i))] = vhat[i][c];
    // contract axis 3, then 2, then 1
    std::vector<cplx> A(static_cast<std::size_t>(D) * D * L), B(static_cast<std::size_t>(D) * L * L), F(cells);
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b)
        for (int j3 = 0; j3 < L; ++j3) {
          cplx s = 0;
          for (int cc = 0; cc < D; ++cc) s += C[(a * D + b) * D + cc] * tw[static_cast<std::size_t>(j3) * D + cc];
          A[(a * D + b) * L + j3] = s;
        }
    for (int a = 0; a < D; ++a)
      for (int j2 = 0; j2 < L; ++j2)
        for (int j3 = 0; j3 < L; ++j3) {
          cplx s = 0;
          for (int b = 0; b < D; ++b) s += A[(a * D + b) * L + j3] * tw[static_cast<std::size_t>(j2) * D + b];
          B[(a * L + j2) * L + j3] = s;
        }
    for (int j1 = 0; j1 < L; ++j1)
      for (int j2 = 0; j2 < L; ++j2)
        for (int j3 = 0; j3 < L; ++j3) {
          cplx s = 0;
          for (int a = 0; a < D; ++a) s += B[(a * L + j2) * L + j3] * tw[static_cast<std::size_t>(j1) * D + a];
          F[(static_cast<std::size_t>(j1) * L + j2) * L + j3] = s;
        }
    const double f = c == 3 ? rho_factor : 1.0;
    out.data[c].resize(cells);
    for (std::size_t q = 0; q < cells; ++q) {
      out.data[c][q] = f * F[q].real();
      max_re = std::max(max_re, std::abs(F[q]));
      max_im = std::max(max_im, std::abs(F[q].imag()));
    }
  }
  out.max_imag_relative = max_re > 0 ? max_im / max_re : 0.0;

  // x = 2 pi G^{-T} s
  const Mat3& G = set.generator();
  const double det = G[0][0] * (G[1][1] * G[2][2] - G[1][2] * G[2][1]) -
                     G[0][1] * (G[1][0] * G[2][2] - G[1][2] * G[2][0]) +
                     G[0][2] * (G[1][0] * G[2][1] - G[1][1] * G[2][0]);
  Mat3 inv{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const int r1 = (c + 1) % 3, r2 = (c + 2) % 3, c1 = (r + 1) % 3, c2 = (r + 2) % 3;
      inv[r][c] = (G[r1][c1] * G[r2][c2] - G[r1][c2] * G[r2][c1]) / det;
    }
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out.cell[r][c] = 2.0 * std::numbers::pi * inv[c][r];
  return out;
}

// ---- diagnostics ----

double ell1(const AmplitudeState& s) {
  double r = 0;
  for (const cplx& x : s.c) r += std::abs(x);
  return r;
}

double ell_alpha_p(const FrequencySet& set, const AmplitudeState& s, double alpha, double p) {
  double r = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double wgt = std::pow(set.fsq(static_cast<int>(i)), 0.5 * p * alpha);
    for (int sg = -1; sg <= 1; ++sg) r += wgt * std::pow(std::abs(s.at(static_cast<int>(i), sg)), p);
  }
  return std::pow(r, 1.0 / p);
}

double energy(const AmplitudeState& s) {
  double r = 0;
  for (const cplx& x : s.c) r += std::norm(x);
  return r;
}

double anisotropy(const std::vector<Vec4c>& vhat) {
  double vert = 0, hor = 0;
  for (const auto& v : vhat) {
    vert += std::norm(v[2]);
    hor += std::norm(v[0]) + std::norm(v[1]);
  }
  return hor > 0 ? vert / hor : 0.0;
}

DiagnosticsRecord diagnostics(const Model& model, const AmplitudeState& s, double t, double N) {
  return {t, ell1(s), energy(s), ell_alpha_p(model.set(), s, 1.0, 2.0),
          anisotropy(physical_coefficients(model.set(), model.frames(), s, t, N))};
}

double reality_defect(const FrequencySet& set, const std::vector<Vec4c>& vhat) {
  double scale = 0, defect = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const std::size_t j = set.size() - 1 - i;
    for (int c = 0; c < 4; ++c) {
      scale = std::max(scale, std::abs(vhat[i][c]));
      defect = std::max(defect, std::abs(vhat[j][c] - std::conj(vhat[i][c])));
    }
  }
  return scale > 0 ? defect / scale : 0.0;
}

// ---- experiments ----

ConvergenceResult convergence_study(Model& model, const SimulationConfig& cfg, const AmplitudeState& init,
                                    const std::vector<double>& N_list) {
  for (std::size_t i = 1; i < N_list.size(); ++i)
    if (!(N_list[i] > N_list[i - 1])) throw ConfigError("N_list must be increasing");
  const auto limit = integrate(SystemKind::Limit, model, cfg, init);
  ConvergenceResult res;
  res.times = limit.times;
  for (double N : N_list) {
    SimulationConfig c = cfg;
    c.dt = std::min(cfg.dt, model.dt_osc(N));
    const auto full = integrate(SystemKind::Full, model, c, init, N);
    if (full.times.size() != limit.times.size()) throw std::logic_error("time grids differ");
    std::vector<double> series;
    double sup = 0;
    for (std::size_t s = 0; s < full.times.size(); ++s) {
      double e = 0;
      for (std::size_t q = 0; q < init.c.size(); ++q) e += std::abs(full.snapshots[s].c[q] - limit.snapshots[s].c[q]);
      series.push_back(e);
      sup = std::max(sup, e);
    }
    const double ratio = res.rows.empty() ? 0.0 : sup / res.rows.back().sup_remainder;
    res.rows.push_back({N, sup, ratio});
    res.remainder.push_back(std::move(series));
  }
  return res;
}

double blowup_free_horizon(Model& model, const SimulationConfig& cfg, const AmplitudeState& init, double factor,
                           double T_max) {
  SimulationConfig c = cfg;
  c.T = T_max;
  c.dt = std::min(cfg.dt, model.dt_osc(cfg.N()));
  c.sample_dt = T_max / 200.0;
  const double bound = factor * ell1(init);
  double horizon = T_max, last = 0.0;
  try {
    run_amplitude(SystemKind::Full, model, c, init, cfg.N(), [&](double t, const std::vector<cplx>& u) {
      double l1 = 0;
      for (const cplx& x : u) l1 += std::abs(x);
      if (l1 > bound) {
        horizon = t;
        return false;
      }
      last = t;
      return true;
    });
  } catch (const NumericError&) {
    horizon = last;
  }
  return horizon;
}

}  // namespace nsb
