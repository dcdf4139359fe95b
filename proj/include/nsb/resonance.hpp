// Exact resonance verdicts, the resonance discriminant, dilation certification
// scans and the restricted-convolution census.
#pragma once

#include "nsb/lattice.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace nsb {

struct SigmaTriple {
  int s0 = 0, s1 = 0, s2 = 0;

  // 0..26, s0 most significant
  int code() const { return (s0 + 1) * 9 + (s1 + 1) * 3 + (s2 + 1); }
  static SigmaTriple from_code(int c) { return {c / 9 - 1, (c / 3) % 3 - 1, c % 3 - 1}; }
  friend bool operator==(const SigmaTriple&, const SigmaTriple&) = default;
};

struct ResonanceVerdict {
  bool resonant = false;
  double omega_value = 0.0;
};

double omega_sigma(const FrequencySet& set, int n, int k, int m, SigmaTriple s);
double omega_sigma(const FrequencyIndex& n, const FrequencyIndex& k, const FrequencyIndex& m,
                   SigmaTriple s, const DilationFactors& d, LatticeKind kind = LatticeKind::Cubic);

// Exact decision on scaled squared norms (common denominators cleared).
bool resonant_exact(const ScaledSquares& n, const ScaledSquares& k, const ScaledSquares& m,
                    SigmaTriple s);

ResonanceVerdict is_resonant_exact(const FrequencySet& set, int n, int k, int m, SigmaTriple s);
ResonanceVerdict is_resonant_exact(const FrequencyIndex& n, const FrequencyIndex& k,
                                   const FrequencyIndex& m, SigmaTriple s, const DilationFactors& d,
                                   LatticeKind kind = LatticeKind::Cubic);

// Q = (A^2 - B^2 - C^2)^2 - 4 B^2 C^2 in exact squared norms; value = num / den.
struct Discriminant {
  QuadInt<BigInt> num;
  BigInt den;
  bool is_zero() const { return num.is_zero(); }
  bool rational() const { return num.is_integer(); }
  Rational value() const;  // rational forms only
};

Discriminant resonance_discriminant(const FrequencyIndex& n, const FrequencyIndex& k,
                                    const FrequencyIndex& m, const DilationFactors& d,
                                    LatticeKind kind = LatticeKind::Cubic);
// |n|^8 |k|^8 |m|^8 times the product of all eight wave combinations; equals Q^2.
Discriminant resonance_polynomial(const FrequencyIndex& n, const FrequencyIndex& k,
                                  const FrequencyIndex& m, const DilationFactors& d,
                                  LatticeKind kind = LatticeKind::Cubic);

// Sign of Q on scaled squares (0 means some all-wave combination resonates).
int discriminant_sign(const ScaledSquares& n, const ScaledSquares& k, const ScaledSquares& m);

struct AdmissibilityRow {
  FrequencyIndex n, k, m;
  std::string q_num, q_den;
  bool generic = false;  // all three horizontal parts nonzero
};

struct AdmissibilityReport {
  std::vector<AdmissibilityRow> rows;
  std::size_t triads_scanned = 0;
  std::size_t generic_rows() const;
  // No resonant all-wave triad with nonzero horizontal parts.
  bool certified() const { return generic_rows() == 0; }
};

AdmissibilityReport gamma_scan(const FrequencySet& set);
void write_csv(std::ostream& os, const AdmissibilityReport& r);

struct CensusResult {
  int shell = 0;
  double sup_sum = 0.0;
  double implied_constant = 0.0;
  FrequencyIndex argmax{};
  int max_fiber_count = 0;  // largest number of resonant k3 over (n, k1, k2) fibers
  std::size_t shell_size = 0;
};

struct EmptyShell : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// fiber_check also scans every (n, k1, k2) fiber over all k3 in the truncation.
CensusResult restricted_convolution_census(const FrequencySet& set, int shell, bool fiber_check = true);
void write_csv(std::ostream& os, const std::vector<CensusResult>& rows);

}  // namespace nsb
