// Time integration of the full, limit, QG and planar Navier-Stokes systems,
// initial data, physical reconstruction and diagnostics.
#pragma once

#include "nsb/errors.hpp"
#include "nsb/interaction.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nsb {

struct Tolerances {
  double divergence = kDivergenceTolerance;
  double reality = 1e-9;
};

struct SimulationConfig {
  double nu = 0.1;
  double kappa = 0.1;
  double g = 1.0;
  double calN = 1.0;  // Brunt-Vaisala frequency
  double T = 1.0;
  double dt = 1e-3;
  double sample_dt = 0.0;  // 0 samples only the endpoints
  LatticeKind kind = LatticeKind::Cubic;
  int M = 2;
  DilationFactors dilation{};
  bool qg_unit_diffusion = false;
  bool keep_cancelling_pair = true;
  // Limit keeps every exactly resonant term instead of the pairs of the limit equations.
  bool limit_all_resonant = false;
  Tolerances tol{};

  double N() const;
  PhysicalParams params() const { return {N(), nu, kappa}; }
  PhysicalParams params(double N_override) const { return {N_override, nu, kappa}; }
};

enum class SystemKind { Full, Limit, QG, NS2D };

struct DiagnosticsRecord {
  double t = 0.0;
  double l1 = 0.0;
  double energy = 0.0;
  double l12 = 0.0;
  double anisotropy = 0.0;
};

template <class State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> snapshots;
  std::vector<DiagnosticsRecord> diagnostics;
};

// theta on every mode; zero on modes with vanishing horizontal part
struct ScalarField {
  std::vector<cplx> theta;
};
// horizontal velocity (w1, w2) per mode
struct PlanarField {
  std::vector<std::array<cplx, 2>> w;
};

// Lattice, frames and lazily built interaction operators for one configuration.
class Model {
 public:
  explicit Model(const SimulationConfig& cfg);
  Model(LatticeKind kind, int M, const DilationFactors& d);

  const FrequencySet& set() const { return set_; }
  const std::vector<CrayaHerringFrame>& frames() const { return frames_; }
  // Resonant entries only unless a full table was requested.
  const TriadTable& table(bool with_nonresonant = false);
  void use_table(TriadTable t);
  DirectConvolution& direct();
  // max over triads of w_n + w_k + w_m; bounds every |w^sigma| in the table
  double omega_max() const;
  double dt_osc(double N) const;

  // QG kernel entries (n, k, m, K) over triads with nonzero horizontal parts.
  struct QgEntry {
    int n, k, m;
    double K;
  };
  const std::vector<QgEntry>& qg_entries();
  const std::vector<Triad>& planar_triads();

 private:
  FrequencySet set_;
  std::vector<CrayaHerringFrame> frames_;
  std::optional<TriadTable> table_;
  std::unique_ptr<DirectConvolution> direct_;
  std::vector<QgEntry> qg_;
  std::vector<Triad> planar_;
  bool planar_ready_ = false;
  double omega_max_ = 0.0;
};

struct TimeGrid {
  int samples = 1;   // sample intervals
  int substeps = 1;  // steps per sample interval
  double h = 0.0;
};
TimeGrid make_time_grid(double T, double dt, double sample_dt);

// Nonlinear right-hand sides (dissipation excluded).
void nonlinear_qg(Model& model, const ScalarField& theta, std::vector<cplx>& out);
void nonlinear_ns2d(Model& model, const PlanarField& w, std::vector<std::array<cplx, 2>>& out);

// Full (with explicit N, N = 0 allowed) and Limit systems.
Trajectory<AmplitudeState> integrate(SystemKind system, Model& model, const SimulationConfig& cfg,
                                     const AmplitudeState& init, std::optional<double> N = std::nullopt);
Trajectory<ScalarField> integrate_qg(Model& model, const SimulationConfig& cfg, const ScalarField& init);
Trajectory<PlanarField> integrate_ns2d(Model& model, const SimulationConfig& cfg, const PlanarField& init);

ScalarField theta_from_w(const FrequencySet& set, const PlanarField& w);
PlanarField w_from_theta(const FrequencySet& set, const ScalarField& theta);

// The vortical amplitude and the QG scalar are related by theta = -i c^0.
ScalarField theta_from_c0(const FrequencySet& set, const AmplitudeState& state);
AmplitudeState c0_from_theta(const FrequencySet& set, const ScalarField& theta);

struct QgEquivResult {
  double max_error = 0.0;
  std::vector<double> times, errors;
};
QgEquivResult qg_equiv_check(Model& model, const SimulationConfig& cfg, const ScalarField& theta0);

AmplitudeState initial_state_from_physical(const Model& model, const std::vector<Vec3c>& u0hat,
                                           const std::vector<cplx>& rho0hat, const SimulationConfig& cfg);

struct InitSpec {
  double amplitude = 1.0;  // l1 norm of the resulting state
  double shell_max = 2.0;  // |n| <= shell_max in generator coordinates
  double rho_scale = 1.0;  // density draws relative to velocity draws
  std::string sector = "all";  // all | vortex | wave
};
AmplitudeState random_initial_state(const Model& model, const SimulationConfig& cfg, const InitSpec& spec,
                                    std::uint64_t seed);

struct PhysicalField {
  int L = 0;
  // u1, u2, u3, rho on an L^3 grid, index ((i1 * L) + i2) * L + i3
  std::array<std::vector<double>, 4> data;
  double max_imag_relative = 0.0;
  Mat3 cell{};  // columns span one fundamental cell
};
PhysicalField reconstruct_physical(const Model& model, const AmplitudeState& state, double t, double N, int L,
                                   const SimulationConfig& cfg);

double ell1(const AmplitudeState& s);
double ell_alpha_p(const FrequencySet& set, const AmplitudeState& s, double alpha, double p);
double energy(const AmplitudeState& s);
double anisotropy(const std::vector<Vec4c>& vhat);
DiagnosticsRecord diagnostics(const Model& model, const AmplitudeState& s, double t, double N);

// max |v_{-n} - conj(v_n)| relative to max |v_n|
double reality_defect(const FrequencySet& set, const std::vector<Vec4c>& vhat);

struct ConvergenceRow {
  double N = 0.0;
  double sup_remainder = 0.0;
  double ratio = 0.0;  // against the previous row; 0 for the first
};
struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  std::vector<double> times;
  std::vector<std::vector<double>> remainder;  // per N, per sample time
};
ConvergenceResult convergence_study(Model& model, const SimulationConfig& cfg, const AmplitudeState& init,
                                    const std::vector<double>& N_list);

// First time the l1 norm exceeds factor * initial norm, or T_max.
double blowup_free_horizon(Model& model, const SimulationConfig& cfg, const AmplitudeState& init, double factor,
                           double T_max);

}  // namespace nsb
