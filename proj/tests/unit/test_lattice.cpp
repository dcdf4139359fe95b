#include "nsb/lattice.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

using namespace nsb;
using exact::BigInt;
using exact::Checked128;
using exact::QuadInt;

TEST_CASE("cubic truncation has (2M+1)^3 - 1 members in lexicographic order") {
  for (int M : {1, 2, 3}) {
    const FrequencySet set(LatticeKind::Cubic, M, {});
    const int side = 2 * M + 1;
    CHECK(set.size() == static_cast<std::size_t>(side * side * side - 1));
    for (std::size_t i = 1; i < set.size(); ++i) CHECK(set[i - 1] < set[i]);
    CHECK_FALSE(set.contains({0, 0, 0}));
    CHECK(set.index_of({0, 0, 0}) < 0);
  }
}

TEST_CASE("negation maps ordinal i to size-1-i") {
  const FrequencySet set(LatticeKind::ObliqueB, 2, {});
  for (std::size_t i = 0; i < set.size(); ++i) {
    const int j = set.negate(static_cast<int>(i));
    CHECK(set[j] == -set[i]);
    CHECK(set.index_of(set[i]) == static_cast<int>(i));
  }
}

TEST_CASE("generator coordinates of the three kinds") {
  const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
  const FrequencySet a(LatticeKind::ObliqueA, 1, {});
  const auto& ka = a.wavevector(a.index_of({1, 1, 1}));
  CHECK(ka[0] == doctest::Approx(1.0));
  CHECK(ka[1] == doctest::Approx(r2));
  CHECK(ka[2] == doctest::Approx(1.0));
  const FrequencySet b(LatticeKind::ObliqueB, 1, {});
  const auto& kb = b.wavevector(b.index_of({1, 1, 1}));
  CHECK(kb[0] == doctest::Approx(2.0));
  CHECK(kb[1] == doctest::Approx(r2 + 1.0));
  CHECK(kb[2] == doctest::Approx(r3));
  const FrequencySet c(LatticeKind::Cubic, 1, DilationFactors(2, 3));
  const auto& kc = c.wavevector(c.index_of({1, -1, 1}));
  CHECK(kc[0] == doctest::Approx(r2));
  CHECK(kc[1] == doctest::Approx(-r3));
  CHECK(kc[2] == doctest::Approx(1.0));
}

TEST_CASE("exact squared norms on the dilated cubic lattice") {
  const auto g = dilated_geometry({1, 1, 1}, DilationFactors(2, 3));
  REQUIRE(g.rational());
  CHECK(g.hsq() == Rational(5));
  CHECK(g.fsq() == Rational(6));
  const auto h = dilated_geometry({1, 2, 0}, DilationFactors(Rational(1, 2), Rational(1, 3)));
  CHECK(h.hsq() == Rational(1, 2) + Rational(4, 3));
}

TEST_CASE("oblique-B squared norms carry a sqrt2 part and match floating point") {
  const DilationFactors d(Rational(3, 2), Rational(5, 7));
  for (const FrequencyIndex& n : {FrequencyIndex{1, 1, 1}, FrequencyIndex{2, -1, 3}, FrequencyIndex{0, 1, -2}}) {
    const auto g = dilated_geometry(LatticeKind::ObliqueB, n, d);
    const double g1 = std::sqrt(1.5), g2 = std::sqrt(5.0 / 7.0);
    const double x = g1 * (n.n1 + n.n2), y = g2 * (std::sqrt(2.0) * n.n2 + n.n3), z = std::sqrt(3.0) * n.n3;
    const double den = exact::to_double(g.den);
    CHECK(exact::to_double(g.hsq_num) / den == doctest::Approx(x * x + y * y).epsilon(1e-13));
    CHECK(exact::to_double(g.fsq_num) / den == doctest::Approx(x * x + y * y + z * z).epsilon(1e-13));
    CHECK((g.hsq_num.b != 0) == (n.n2 * n.n3 != 0));
  }
}

TEST_CASE("triad enumeration matches a brute-force pair count") {
  for (LatticeKind kind : {LatticeKind::Cubic, LatticeKind::ObliqueA}) {
    const FrequencySet set(kind, 2, {});
    std::size_t brute = 0;
    for (const auto& n : set.members())
      for (const auto& k : set.members()) {
        const FrequencyIndex m = n - k;
        brute += !m.is_zero() && set.contains(m);
      }
    CHECK(triad_count(set) == brute);
    std::size_t seen = 0;
    for_each_triad(set, [&](int n, int k, int m) {
      CHECK(set[n] == set[k] + set[m]);
      ++seen;
    });
    CHECK(seen == brute);
  }
}

TEST_CASE("descriptor round trip preserves the hash") {
  const FrequencySet set(LatticeKind::ObliqueA, 2, DilationFactors(Rational(2), Rational(3, 5)));
  const FrequencySet back = FrequencySet::from_descriptor(set.descriptor());
  CHECK(back.hash() == set.hash());
  CHECK(back.dilation() == set.dilation());
  const FrequencySet other(LatticeKind::ObliqueA, 2, DilationFactors(Rational(2), Rational(3, 4)));
  CHECK(other.hash() != set.hash());
}

TEST_CASE("dilation factors must be positive") {
  CHECK_THROWS_AS(DilationFactors(Rational(0), Rational(1)), std::invalid_argument);
  CHECK_THROWS_AS(DilationFactors(Rational(1), Rational(-2)), std::invalid_argument);
  CHECK_THROWS_AS(lattice_kind_from_string("hexagonal"), std::invalid_argument);
}

TEST_CASE("rational parsing") {
  CHECK(exact::parse_rational("2/1") == Rational(2));
  CHECK(exact::parse_rational(" 6/4 ") == Rational(3, 2));
  CHECK(exact::parse_rational("1.5") == Rational(3, 2));
  CHECK(exact::parse_rational("-0.25") == Rational(-1, 4));
  CHECK(exact::parse_rational("7") == Rational(7));
  CHECK_THROWS_AS(exact::parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(exact::parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(exact::parse_rational("1.2.3"), std::invalid_argument);
}

TEST_CASE("checked 128-bit arithmetic throws on overflow") {
  const Checked128 big = Checked128::raw(static_cast<__int128>(1) << 100);
  CHECK_THROWS_AS(big * big, exact::Overflow);
  CHECK_NOTHROW(big + big);
  CHECK(exact::to_big(big * Checked128(3)) == BigInt(3) * (BigInt(1) << 100));
}

TEST_CASE("sign of a + b sqrt2 + c sqrt3 + d sqrt6 agrees with 50-digit evaluation") {
  using Float50 = boost::multiprecision::cpp_bin_float_50;
  const Float50 s2 = boost::multiprecision::sqrt(Float50(2)), s3 = boost::multiprecision::sqrt(Float50(3));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> u(-60, 60);
  int zeros = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    QuadInt<BigInt> x{u(rng), u(rng), u(rng), u(rng)};
    if (trial % 4 == 0) {  // near-cancelling cases: (p + q sqrt2)(p - q sqrt2) style
      const int p = u(rng), q = u(rng);
      x = QuadInt<BigInt>{BigInt(p) * p - 2 * BigInt(q) * q, 0, 0, 0};
    }
    const Float50 v = Float50(x.a.str()) + Float50(x.b.str()) * s2 + Float50(x.c.str()) * s3 +
                      Float50(x.d.str()) * s2 * s3;
    const int want = v > 1e-40 ? 1 : (v < -1e-40 ? -1 : 0);
    CHECK(exact::sign_of(x) == want);
    zeros += want == 0;
  }
  // exact identities: sqrt2*sqrt3 - sqrt6 = 0
  const QuadInt<BigInt> r2{0, 1, 0, 0}, r3{0, 0, 1, 0}, r6{0, 0, 0, 1};
  CHECK((r2 * r3 - r6).is_zero());
  CHECK(exact::sign_of(r2 * r2 - QuadInt<BigInt>{2, 0, 0, 0}) == 0);
  CHECK(exact::sign_of(QuadInt<BigInt>{-3, 0, 0, 1} * QuadInt<BigInt>{1, 0, 0, 0}) == -1);  // sqrt6 < 3
}
