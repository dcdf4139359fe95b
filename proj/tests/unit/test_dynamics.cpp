#include "nsb/dynamics.hpp"
#include "nsb/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace nsb;

namespace {

const cplx I{0, 1};

SimulationConfig small_config(int M) {
  SimulationConfig cfg;
  cfg.M = M;
  cfg.nu = cfg.kappa = 0.1;
  cfg.T = 0.5;
  cfg.dt = 0.01;
  cfg.sample_dt = 0.05;
  return cfg;
}

AmplitudeState random_state(const Model& model, const SimulationConfig& cfg, std::uint64_t seed,
                            const std::string& sector = "all") {
  InitSpec spec;
  spec.shell_max = 2.0 * cfg.M;
  spec.sector = sector;
  return random_initial_state(model, cfg, spec, seed);
}

}  // namespace

TEST_CASE("time grid") {
  const TimeGrid a = make_time_grid(1.0, 0.01, 0.1);
  CHECK(a.samples == 10);
  CHECK(a.substeps == 10);
  CHECK(a.h == doctest::Approx(0.01));
  const TimeGrid b = make_time_grid(1.0, 0.3, 0.0);
  CHECK(b.samples == 1);
  CHECK(b.substeps == 4);
  CHECK(b.h == doctest::Approx(0.25));
  CHECK_THROWS_AS(make_time_grid(1.0, 0.01, 0.3), ConfigError);
  CHECK_THROWS_AS(make_time_grid(1.0, 0.0, 0.1), ConfigError);
}

TEST_CASE("N is calN sqrt(g)") {
  SimulationConfig cfg;
  cfg.calN = 10;
  cfg.g = 4;
  CHECK(cfg.N() == 20.0);
  cfg.g = 9;
  CHECK(cfg.N() == 30.0);
}

TEST_CASE("oscillation bound") {
  Model model(LatticeKind::Cubic, 2, {});
  CHECK(model.omega_max() == doctest::Approx(3.0));
  CHECK(model.dt_osc(10) == doctest::Approx(0.2 / 30));
  SimulationConfig cfg = small_config(2);
  const AmplitudeState s = random_state(model, cfg, 1);
  cfg.dt = 0.01;
  CHECK_THROWS_AS(integrate(SystemKind::Full, model, cfg, s, 100.0), ConfigError);
  CHECK_NOTHROW(integrate(SystemKind::Limit, model, cfg, s));
}

TEST_CASE("non-finite state aborts with the time") {
  Model model(LatticeKind::Cubic, 1, {});
  SimulationConfig cfg = small_config(1);
  AmplitudeState s = random_state(model, cfg, 1);
  s.c[4] = std::numeric_limits<double>::quiet_NaN();
  try {
    integrate(SystemKind::Limit, model, cfg, s);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("t=") != std::string::npos);
  }
}

TEST_CASE("single-mode QG decays by the heat factor") {
  Model model(LatticeKind::Cubic, 2, DilationFactors(2, 3));
  SimulationConfig cfg = small_config(2);
  cfg.nu = 1.0;
  cfg.T = 1.0;
  cfg.sample_dt = 0;
  ScalarField th;
  th.theta.assign(model.set().size(), 0.0);
  const int i = model.set().index_of({1, 2, -1});
  th.theta[i] = 0.3;
  const auto tr = integrate_qg(model, cfg, th);
  const double f = model.set().fsq(i);
  CHECK(std::abs(tr.snapshots.back().theta[i] - 0.3 * std::exp(-f)) < 1e-10);
  CHECK(qg_equiv_check(model, cfg, th).max_error <= 1e-12);
}

TEST_CASE("theta and w symbols") {
  const FrequencySet set(LatticeKind::Cubic, 1, {});
  ScalarField th;
  th.theta.assign(set.size(), 0.0);
  th.theta[set.index_of({1, 0, 1})] = 1.0;
  const PlanarField w = w_from_theta(set, th);
  const auto& w101 = w.w[set.index_of({1, 0, 1})];
  CHECK(std::abs(w101[0]) < 1e-15);
  CHECK(std::abs(w101[1] - I) < 1e-15);

  const FrequencySet big(LatticeKind::ObliqueB, 2, DilationFactors(Rational(1, 3), Rational(2)));
  InitSpec spec;
  spec.shell_max = 4;
  const ScalarField r = random_theta(big, spec, 5);
  const PlanarField rw = w_from_theta(big, r);
  const ScalarField back = theta_from_w(big, rw);
  for (std::size_t i = 0; i < big.size(); ++i) {
    CHECK(std::abs(back.theta[i] - r.theta[i]) < 1e-12);
    const auto& k = big.wavevector(static_cast<int>(i));
    CHECK(std::abs(k[0] * rw.w[i][0] + k[1] * rw.w[i][1]) < 1e-12);
  }
  ScalarField bad = th;
  bad.theta[set.index_of({0, 0, 1})] = 1.0;
  CHECK_THROWS_AS(w_from_theta(set, bad), std::invalid_argument);
}

TEST_CASE("QG and planar Navier-Stokes twin runs agree") {
  Model model(LatticeKind::Cubic, 3, {});
  SimulationConfig cfg = small_config(3);
  cfg.T = 1.0;
  cfg.dt = 1e-2;
  cfg.sample_dt = 0.1;
  InitSpec spec;
  spec.shell_max = 3;
  const auto r = qg_equiv_check(model, cfg, random_theta(model.set(), spec, 2));
  CHECK(r.max_error <= 1e-8);
  CHECK(r.times.size() == 11);
}

TEST_CASE("vortical sector of the limit system is the QG flow") {
  Model model(LatticeKind::Cubic, 2, {});
  SimulationConfig cfg = small_config(2);
  InitSpec spec;
  spec.shell_max = 3;
  const ScalarField th = random_theta(model.set(), spec, 3);
  const AmplitudeState c0 = c0_from_theta(model.set(), th);
  const auto lim = integrate(SystemKind::Limit, model, cfg, c0);
  const auto qg = integrate_qg(model, cfg, th);
  double err = 0;
  for (std::size_t s = 0; s < lim.snapshots.size(); ++s) {
    const ScalarField a = theta_from_c0(model.set(), lim.snapshots[s]);
    for (std::size_t i = 0; i < a.theta.size(); ++i) err = std::max(err, std::abs(a.theta[i] - qg.snapshots[s].theta[i]));
    for (std::size_t i = 0; i < model.set().size(); ++i) {
      CHECK(std::abs(lim.snapshots[s].at(static_cast<int>(i), 1)) < 1e-14);
      CHECK(std::abs(lim.snapshots[s].at(static_cast<int>(i), -1)) < 1e-14);
    }
  }
  CHECK(err <= 1e-8);
}

TEST_CASE("reality is preserved along full and limit flows") {
  Model model(LatticeKind::ObliqueA, 2, DilationFactors(2, 3));
  SimulationConfig cfg = small_config(2);
  const AmplitudeState s = random_state(model, cfg, 4);
  const double N = 5.0;
  cfg.dt = model.dt_osc(N);
  CHECK(reality_defect(model.set(), physical_coefficients(model.set(), model.frames(), s, 0, N)) < 1e-14);
  const auto full = integrate(SystemKind::Full, model, cfg, s, N);
  const auto& e = full.snapshots.back();
  CHECK(reality_defect(model.set(), physical_coefficients(model.set(), model.frames(), e, e.t, N)) < 1e-9);
  cfg.dt = 0.01;
  const auto lim = integrate(SystemKind::Limit, model, cfg, s);
  CHECK(reality_defect(model.set(), physical_coefficients(model.set(), model.frames(), lim.snapshots.back(), 0, 0)) <
        1e-9);
}

TEST_CASE("energy does not increase at N = 0 with kappa = nu") {
  Model model(LatticeKind::Cubic, 2, {});
  SimulationConfig cfg = small_config(2);
  cfg.sample_dt = 0.01;
  InitSpec spec;
  spec.shell_max = 3;
  spec.amplitude = 5;
  const auto tr = integrate(SystemKind::Full, model, cfg, random_initial_state(model, cfg, spec, 6), 0.0);
  for (std::size_t s = 1; s < tr.diagnostics.size(); ++s)
    CHECK(tr.diagnostics[s].energy <= tr.diagnostics[s - 1].energy * (1 + 1e-12));
}

TEST_CASE("convergence study") {
  Model model(LatticeKind::Cubic, 1, {});
  SimulationConfig cfg = small_config(1);
  const AmplitudeState s = random_state(model, cfg, 7);
  const auto r = convergence_study(model, cfg, s, {10, 100});
  REQUIRE(r.rows.size() == 2);
  CHECK(r.remainder[0][0] == 0.0);
  CHECK(r.rows[1].sup_remainder < r.rows[0].sup_remainder);
  CHECK(r.rows[1].ratio == doctest::Approx(r.rows[1].sup_remainder / r.rows[0].sup_remainder));
  CHECK_THROWS_AS(convergence_study(model, cfg, s, {100, 10}), ConfigError);

  // a c^0 init still excites waves through the non-resonant B^{+-1}(c^0, c^0), at O(1/N)
  const auto v = convergence_study(model, cfg, random_state(model, cfg, 7, "vortex"), {100, 1000});
  CHECK(v.rows[1].ratio < 0.2);
}

TEST_CASE("initial data from physical fields") {
  Model model(LatticeKind::Cubic, 1, {});
  SimulationConfig cfg = small_config(1);
  cfg.calN = 4;
  const auto& set = model.set();
  std::vector<Vec3c> u(set.size(), Vec3c{});
  std::vector<cplx> rho(set.size(), 0.0);
  const int a = set.index_of({1, 0, 1}), b = set.negate(a);
  u[a] = {0, 1, 0};
  u[b] = {0, 1, 0};
  const AmplitudeState sw = initial_state_from_physical(model, u, rho, cfg);
  for (std::size_t i = 0; i < set.size(); ++i) {
    CHECK(std::abs(sw.at(static_cast<int>(i), 1)) < 1e-15);
    CHECK(std::abs(sw.at(static_cast<int>(i), -1)) < 1e-15);
  }
  CHECK(std::abs(sw.at(a, 0)) == doctest::Approx(1.0));

  std::fill(u.begin(), u.end(), Vec3c{});
  u[a] = {1, 0, 1};  // parallel to n: a pure gradient
  CHECK(ell1(initial_state_from_physical(model, u, rho, cfg)) < 1e-15);

  std::fill(u.begin(), u.end(), Vec3c{});
  rho[a] = 1.0;
  const AmplitudeState r = initial_state_from_physical(model, u, rho, cfg);
  CHECK(std::sqrt(energy(r)) == doctest::Approx(0.25));
  CHECK(std::sqrt(energy(r)) < 1.0);
}

TEST_CASE("physical reconstruction") {
  Model model(LatticeKind::Cubic, 1, {});
  SimulationConfig cfg = small_config(1);
  const auto& set = model.set();
  AmplitudeState s(set.size());
  const int a = set.index_of({1, 0, 1});
  s.at(a, 0) = 0.5;
  s.at(set.negate(a), 0) = -0.5;  // q^0 is odd in n
  const int L = 6;
  const PhysicalField f = reconstruct_physical(model, s, 0, 0, L, cfg);
  double err = 0;
  for (int i1 = 0; i1 < L; ++i1)
    for (int i2 = 0; i2 < L; ++i2)
      for (int i3 = 0; i3 < L; ++i3) {
        const std::size_t q = (static_cast<std::size_t>(i1) * L + i2) * L + i3;
        err = std::max(err, std::abs(f.data[1][q] - std::cos(2 * std::numbers::pi * (i1 + i3) / L)));
        for (int c : {0, 2, 3}) err = std::max(err, std::abs(f.data[c][q]));
      }
  CHECK(err < 1e-12);
  CHECK(f.max_imag_relative < 1e-12);
  CHECK(f.cell[0][0] == doctest::Approx(2 * std::numbers::pi));

  const AmplitudeState r = random_state(model, cfg, 9);
  const PhysicalField g = reconstruct_physical(model, r, 0.3, 2.0, 5, cfg);
  double grid = 0, spec = 0;
  for (int c = 0; c < 4; ++c)
    for (double x : g.data[c]) grid += x * x;
  grid /= 125.0;
  for (const auto& v : physical_coefficients(set, model.frames(), r, 0.3, 2.0))
    for (const cplx& x : v) spec += std::norm(x);
  CHECK(grid == doctest::Approx(spec).epsilon(1e-10));

  const PhysicalField z = reconstruct_physical(model, AmplitudeState(set.size()), 0, 0, 3, cfg);
  for (int c = 0; c < 4; ++c)
    for (double x : z.data[c]) CHECK(x == 0.0);
  CHECK_THROWS_AS(reconstruct_physical(model, r, 0, 0, 2, cfg), std::invalid_argument);
}

TEST_CASE("diagnostics") {
  Model model(LatticeKind::Cubic, 1, {});
  const auto& set = model.set();
  AmplitudeState s(set.size());
  s.at(set.index_of({1, 0, 1}), 0) = 1.0;
  const DiagnosticsRecord d = diagnostics(model, s, 0, 0);
  CHECK(d.l1 == 1.0);
  CHECK(d.l12 == doctest::Approx(std::sqrt(2.0)));
  CHECK(d.anisotropy == 0.0);
  const AmplitudeState r = random_state(model, small_config(1), 3);
  CHECK(ell_alpha_p(set, r, 0.0, 2.0) == doctest::Approx(std::sqrt(energy(r))));
  CHECK(ell1(r) == doctest::Approx(1.0));
}

TEST_CASE("random initial data") {
  Model model(LatticeKind::Cubic, 2, {});
  const SimulationConfig cfg = small_config(2);
  InitSpec spec;
  spec.amplitude = 2.5;
  spec.shell_max = 1.5;
  const AmplitudeState a = random_initial_state(model, cfg, spec, 42), b = random_initial_state(model, cfg, spec, 42);
  CHECK(a.c == b.c);
  CHECK(ell1(a) == doctest::Approx(2.5));
  for (std::size_t i = 0; i < model.set().size(); ++i) {
    const auto& n = model.set()[i];
    if (n.n1 * n.n1 + n.n2 * n.n2 + n.n3 * n.n3 > 2)
      for (int s = -1; s <= 1; ++s) CHECK(a.at(static_cast<int>(i), s) == 0.0);
  }
  spec.sector = "wave";
  const AmplitudeState w = random_initial_state(model, cfg, spec, 1);
  for (std::size_t i = 0; i < model.set().size(); ++i) CHECK(w.at(static_cast<int>(i), 0) == 0.0);
  spec.shell_max = 0.5;
  CHECK_THROWS_AS(random_initial_state(model, cfg, spec, 1), ConfigError);
}
