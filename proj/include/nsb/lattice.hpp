// Truncated frequency lattices, their anisotropic dilations, and triad enumeration.
#pragma once

#include "nsb/exact.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsb {

using exact::BigInt;
using exact::Checked128;
using exact::QuadInt;
using exact::Rational;

enum class LatticeKind { Cubic, ObliqueA, ObliqueB };

std::string to_string(LatticeKind kind);
LatticeKind lattice_kind_from_string(const std::string& s);

struct FrequencyIndex {
  int n1 = 0, n2 = 0, n3 = 0;

  friend FrequencyIndex operator+(FrequencyIndex a, FrequencyIndex b) {
    return {a.n1 + b.n1, a.n2 + b.n2, a.n3 + b.n3};
  }
  friend FrequencyIndex operator-(FrequencyIndex a, FrequencyIndex b) {
    return {a.n1 - b.n1, a.n2 - b.n2, a.n3 - b.n3};
  }
  FrequencyIndex operator-() const { return {-n1, -n2, -n3}; }
  bool is_zero() const { return n1 == 0 && n2 == 0 && n3 == 0; }
  friend auto operator<=>(const FrequencyIndex&, const FrequencyIndex&) = default;
};

std::string to_string(const FrequencyIndex& n);

struct DilationFactors {
  Rational g1sq{1}, g2sq{1};

  DilationFactors() = default;
  DilationFactors(Rational a, Rational b);  // throws std::invalid_argument unless both > 0
  bool operator==(const DilationFactors&) const = default;
};

// Exact squared norms of a dilated mode: value = num / den, num in Z[sqrt2, sqrt3].
struct ModeGeometrySquares {
  QuadInt<BigInt> hsq_num, fsq_num;
  BigInt den;

  bool rational() const { return hsq_num.is_integer() && fsq_num.is_integer(); }
  Rational hsq() const;  // throws std::domain_error for irrational forms
  Rational fsq() const;
};

// Exact squared norms with the set's common denominator cleared. Ratios such as
// hsq_a * fsq_b versus hsq_b * fsq_a are unaffected by the common scale.
struct ScaledSquares {
  QuadInt<Checked128> h, f;
};

ScaledSquares scaled_squares(LatticeKind kind, const FrequencyIndex& n, const DilationFactors& d);
ModeGeometrySquares dilated_geometry(LatticeKind kind, const FrequencyIndex& n,
                                     const DilationFactors& d);
// Cubic-kind convenience form.
ModeGeometrySquares dilated_geometry(const FrequencyIndex& n, const DilationFactors& d);

using Mat3 = std::array<std::array<double, 3>, 3>;

// Linear map from generator coordinates to dilated physical wavevectors.
Mat3 generator_matrix(LatticeKind kind, const DilationFactors& d);

class FrequencySet {
 public:
  FrequencySet(LatticeKind kind, int M, DilationFactors dilation);

  LatticeKind kind() const { return kind_; }
  int M() const { return M_; }
  int side() const { return 2 * M_ + 1; }
  const DilationFactors& dilation() const { return dilation_; }
  std::size_t size() const { return members_.size(); }
  const std::vector<FrequencyIndex>& members() const { return members_; }
  const FrequencyIndex& operator[](std::size_t i) const { return members_[i]; }

  bool contains(const FrequencyIndex& n) const;
  // Dense ordinal, or -1 when n is zero or outside the truncation.
  int index_of(const FrequencyIndex& n) const;
  int negate(int ordinal) const { return static_cast<int>(members_.size()) - 1 - ordinal; }

  // Offset of n in the full (2M+1)^3 cube, origin included.
  int cube_offset(const FrequencyIndex& n) const {
    const int s = side();
    return ((n.n1 + M_) * s + (n.n2 + M_)) * s + (n.n3 + M_);
  }
  int cube_offset(int ordinal) const { return cube_of_[ordinal]; }

  const Mat3& generator() const { return G_; }
  const std::array<double, 3>& wavevector(int i) const { return kvec_[i]; }
  double hsq(int i) const { return hsq_[i]; }
  double fsq(int i) const { return fsq_[i]; }
  double omega(int i) const { return omega_[i]; }
  bool horizontal_zero(int i) const { return hzero_[i] != 0; }
  const ScaledSquares& squares(int i) const { return sq_[i]; }

  std::uint64_t hash() const { return hash_; }
  nlohmann::json descriptor() const;
  static FrequencySet from_descriptor(const nlohmann::json& j);

 private:
  LatticeKind kind_;
  int M_;
  DilationFactors dilation_;
  std::vector<FrequencyIndex> members_;
  std::vector<int> ordinal_of_cube_;
  std::vector<int> cube_of_;
  Mat3 G_{};
  std::vector<std::array<double, 3>> kvec_;
  std::vector<double> hsq_, fsq_, omega_;
  std::vector<std::uint8_t> hzero_;
  std::vector<ScaledSquares> sq_;
  std::uint64_t hash_ = 0;
};

struct Triad {
  int n, k, m;
};

// Calls fn(n, k, m) for every triad n = k + m inside the set, ordered by n then k.
template <class Fn>
void for_each_triad(const FrequencySet& set, Fn&& fn) {
  const int M = set.M();
  const int count = static_cast<int>(set.size());
  for (int in = 0; in < count; ++in) {
    const FrequencyIndex n = set[in];
    const int lo1 = std::max(-M, n.n1 - M), hi1 = std::min(M, n.n1 + M);
    const int lo2 = std::max(-M, n.n2 - M), hi2 = std::min(M, n.n2 + M);
    const int lo3 = std::max(-M, n.n3 - M), hi3 = std::min(M, n.n3 + M);
    for (int a = lo1; a <= hi1; ++a)
      for (int b = lo2; b <= hi2; ++b)
        for (int c = lo3; c <= hi3; ++c) {
          const FrequencyIndex k{a, b, c};
          const FrequencyIndex m = n - k;
          if (k.is_zero() || m.is_zero()) continue;
          fn(in, set.index_of(k), set.index_of(m));
        }
  }
}

std::vector<Triad> triads(const FrequencySet& set);
std::size_t triad_count(const FrequencySet& set);

// FNV-1a, used for cache keys and config hashes.
std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed = 1469598103934665603ULL);
std::uint64_t fnv1a(const std::string& s, std::uint64_t seed = 1469598103934665603ULL);

}  // namespace nsb
