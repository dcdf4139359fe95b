#include "nsb/resonance.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace nsb;

namespace {

// Q from hand-written cubic squared norms in exact rationals.
Rational q_oracle(const FrequencyIndex& n, const FrequencyIndex& k, const FrequencyIndex& m, const Rational& t1,
                  const Rational& t2) {
  const auto h = [&](const FrequencyIndex& x) { return t1 * x.n1 * x.n1 + t2 * x.n2 * x.n2; };
  const auto f = [&](const FrequencyIndex& x) { return h(x) + x.n3 * x.n3; };
  const Rational A = h(n) * f(k) * f(m), B = f(n) * h(k) * f(m), C = f(n) * f(k) * h(m);
  const Rational E = A - B - C;
  return E * E - 4 * B * C;
}

bool float_all_wave_resonant(const FrequencySet& set, int n, int k, int m) {
  for (int s1 : {-1, 1})
    for (int s2 : {-1, 1})
      if (std::abs(omega_sigma(set, n, k, m, {1, s1, s2})) < 1e-9) return true;
  return false;
}

}  // namespace

TEST_CASE("worked triads") {
  CHECK(is_resonant_exact({1, 0, -1}, {1, 0, 1}, {0, 0, -2}, {1, 1, 1}, {}).resonant);
  const Discriminant q0 = resonance_discriminant({1, 0, -1}, {1, 0, 1}, {0, 0, -2}, {});
  CHECK(q0.is_zero());
  const Discriminant q1 = resonance_discriminant({1, 0, 1}, {1, 0, 0}, {0, 0, 1}, {});
  CHECK(q1.value() == Rational(1));
  CHECK(resonance_polynomial({1, 0, 1}, {1, 0, 0}, {0, 0, 1}, {}).value() == Rational(1));
}

TEST_CASE("non-resonant single wave term and mismatched triad") {
  // sigma = (0, 1, 0): only k oscillates, and k has nonzero horizontal part
  const FrequencySet set(LatticeKind::Cubic, 2, {});
  const int n = set.index_of({1, 1, 0}), k = set.index_of({1, 0, 1}), m = set.index_of({0, 1, -1});
  CHECK_FALSE(is_resonant_exact(set, n, k, m, {0, 1, 0}).resonant);
  CHECK(is_resonant_exact(set, n, k, m, {0, 0, 0}).resonant);
  CHECK_THROWS_AS(is_resonant_exact(set, n, k, k, {0, 0, 0}), std::invalid_argument);
}

TEST_CASE("discriminant matches an exact rational oracle on dilated cubic triads") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> u(-4, 4), p(1, 9);
  for (int trial = 0; trial < 300; ++trial) {
    const FrequencyIndex k{u(rng), u(rng), u(rng)}, m{u(rng), u(rng), u(rng)};
    const FrequencyIndex n = k + m;
    if (n.is_zero() || k.is_zero() || m.is_zero()) continue;
    const Rational t1(p(rng), p(rng)), t2(p(rng), p(rng));
    const Discriminant q = resonance_discriminant(n, k, m, DilationFactors(t1, t2));
    CHECK(q.value() == q_oracle(n, k, m, t1, t2));
  }
}

TEST_CASE("discriminant equals the scaled product of the four wave combinations") {
  for (LatticeKind kind : {LatticeKind::Cubic, LatticeKind::ObliqueA, LatticeKind::ObliqueB}) {
    const FrequencySet set(kind, 2, DilationFactors(Rational(3, 2), Rational(2)));
    int checked = 0;
    for_each_triad(set, [&](int n, int k, int m) {
      if (++checked % 37) return;
      const Discriminant q = resonance_discriminant(set[n], set[k], set[m], set.dilation(), kind);
      const double a = set.omega(n), b = set.omega(k), c = set.omega(m);
      const double scale = set.fsq(n) * set.fsq(k) * set.fsq(m);
      const double prod = (a - b - c) * (a + b + c) * (a - b + c) * (a + b - c) * scale * scale;
      const double val = exact::to_double(q.num) / exact::to_double(q.den);
      CHECK(val == doctest::Approx(prod).epsilon(1e-10).scale(scale * scale));
    });
  }
}

TEST_CASE("leading coefficient in gamma1^2 is -3 (n1 k1 m1)^4") {
  const FrequencyIndex k{1, 2, -1}, m{2, -1, 3};
  const FrequencyIndex n = k + m;
  // sixth finite difference of Q(t) at t = 1..7 divided by 6!
  std::vector<Rational> q;
  for (int t = 1; t <= 7; ++t) q.push_back(resonance_discriminant(n, k, m, DilationFactors(t, 1)).value());
  for (int order = 0; order < 6; ++order)
    for (std::size_t i = 0; i + 1 < q.size() - order; ++i) q[i] = q[i + 1] - q[i];
  const BigInt prod = BigInt(n.n1 * n.n1) * (k.n1 * k.n1) * (m.n1 * m.n1);
  CHECK(q[0] / 720 == Rational(-3 * prod * prod));
}

TEST_CASE("discriminant symmetries and degree") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> u(-3, 3);
  const DilationFactors d(2, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const FrequencyIndex k{u(rng), u(rng), u(rng)}, m{u(rng), u(rng), u(rng)};
    const FrequencyIndex n = k + m;
    if (n.is_zero() || k.is_zero() || m.is_zero()) continue;
    const Rational q = resonance_discriminant(n, k, m, d).value();
    CHECK(resonance_discriminant(n, m, k, d).value() == q);
    CHECK(resonance_discriminant(-n, -k, -m, d).value() == q);
    const FrequencyIndex n2{2 * n.n1, 2 * n.n2, 2 * n.n3}, k2{2 * k.n1, 2 * k.n2, 2 * k.n3},
        m2{2 * m.n1, 2 * m.n2, 2 * m.n3};
    CHECK(resonance_discriminant(n2, k2, m2, d).value() == q * 4096);
  }
}

TEST_CASE("Q vanishes exactly when some all-wave combination resonates") {
  for (const auto& d : {DilationFactors(1, 1), DilationFactors(2, 3)})
    for (LatticeKind kind : {LatticeKind::Cubic, LatticeKind::ObliqueA, LatticeKind::ObliqueB}) {
      const FrequencySet set(kind, 2, d);
      std::size_t mismatch = 0;
      for_each_triad(set, [&](int n, int k, int m) {
        const bool q0 = discriminant_sign(set.squares(n), set.squares(k), set.squares(m)) == 0;
        mismatch += q0 != float_all_wave_resonant(set, n, k, m);
      });
      CHECK(mismatch == 0);
    }
}

TEST_CASE("exact verdicts agree with the float shadow on oblique lattices") {
  for (const auto& d : {DilationFactors(1, 1), DilationFactors(2, 3)})
    for (LatticeKind kind : {LatticeKind::ObliqueA, LatticeKind::ObliqueB}) {
      const FrequencySet set(kind, 2, d);
      std::size_t mismatch = 0;
      for_each_triad(set, [&](int n, int k, int m) {
        for (int code = 0; code < 27; ++code) {
          const SigmaTriple s = SigmaTriple::from_code(code);
          mismatch += is_resonant_exact(set, n, k, m, s).resonant != (std::abs(omega_sigma(set, n, k, m, s)) < 1e-9);
        }
      });
      CHECK(mismatch == 0);
    }
}

TEST_CASE("gamma scan on the periodic lattice reports the worked triad") {
  const FrequencySet set(LatticeKind::Cubic, 2, {});
  const auto report = gamma_scan(set);
  bool found = false;
  for (const auto& r : report.rows)
    found = found || (r.n == FrequencyIndex{1, 0, -1} && r.k == FrequencyIndex{1, 0, 1} && r.m == FrequencyIndex{0, 0, -2});
  CHECK(found);
  std::ostringstream os;
  write_csv(os, report);
  CHECK(os.str().find("1,0,-1,1,0,1,0,0,-2,0,1") != std::string::npos);
}

TEST_CASE("gamma scan at (2,3) finds no generic all-wave resonance for M=2") {
  const auto report = gamma_scan(FrequencySet(LatticeKind::Cubic, 2, DilationFactors(2, 3)));
  CHECK(report.certified());
}

TEST_CASE("census agrees with a brute-force float census") {
  const FrequencySet set(LatticeKind::Cubic, 6, {});
  for (int shell : {1, 2}) {
    const CensusResult r = restricted_convolution_census(set, shell);
    double sup = 0;
    int fiber = 0;
    for (const auto& n : set.members()) {
      if (n.n1 == 0 && n.n2 == 0) continue;
      const int in = set.index_of(n);
      double sum = 0;
      for (const auto& k : set.members()) {
        const FrequencyIndex m = -n - k;
        if (m.is_zero() || !set.contains(m)) continue;
        const double f = double(k.n1) * k.n1 + double(k.n2) * k.n2 + double(k.n3) * k.n3;
        if (f < std::ldexp(1.0, 2 * shell) || f > std::ldexp(1.0, 2 * shell + 2)) continue;
        if (float_all_wave_resonant(set, set.negate(in), set.index_of(k), set.index_of(m))) sum += 1 / std::sqrt(f);
      }
      sup = std::max(sup, sum);
      for (int k1 = -6; k1 <= 6; ++k1)
        for (int k2 = -6; k2 <= 6; ++k2) {
          int count = 0;
          for (int k3 = -6; k3 <= 6; ++k3) {
            const FrequencyIndex k{k1, k2, k3};
            const FrequencyIndex m = -n - k;
            if (k.is_zero() || m.is_zero() || !set.contains(m)) continue;
            count += float_all_wave_resonant(set, set.negate(in), set.index_of(k), set.index_of(m));
          }
          fiber = std::max(fiber, count);
        }
    }
    CHECK(r.sup_sum == doctest::Approx(sup).epsilon(1e-12));
    CHECK(r.max_fiber_count == fiber);
    CHECK(r.max_fiber_count <= 8);
  }
  CHECK_THROWS_AS(restricted_convolution_census(FrequencySet(LatticeKind::Cubic, 2, DilationFactors(2, 3)), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(restricted_convolution_census(FrequencySet(LatticeKind::Cubic, 2, {}), 3), EmptyShell);
}
