// Triad interaction coefficients and the bilinear forms of the amplitude system.
#pragma once

#include "nsb/basis.hpp"
#include "nsb/kernels.hpp"
#include "nsb/resonance.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace nsb {

// Amplitudes c^{-1}, c^0, c^{+1} per mode, flat as c[3 * ordinal + sigma + 1].
struct AmplitudeState {
  std::vector<cplx> c;
  double t = 0.0;

  AmplitudeState() = default;
  explicit AmplitudeState(std::size_t modes, double time = 0.0) : c(3 * modes), t(time) {}
  std::size_t modes() const { return c.size() / 3; }
  cplx& at(int ordinal, int sigma) { return c[3 * ordinal + sigma + 1]; }
  cplx at(int ordinal, int sigma) const { return c[3 * ordinal + sigma + 1]; }
};

struct PhysicalParams {
  double N = 0.0;
  double nu = 0.0;
  double kappa = 0.0;
  double mu(int sigma0) const { return sigma0 == 0 ? nu : 0.5 * (nu + kappa); }
};

// (sigma1, sigma2) pairs admitted in a bilinear form, indexed [s1 + 1][s2 + 1].
struct PairSet {
  std::array<std::array<bool, 3>, 3> on{};
  static PairSet all();
  static PairSet none() { return {}; }
  PairSet& add(int s1, int s2) {
    on[s1 + 1][s2 + 1] = true;
    return *this;
  }
  bool has(int s1, int s2) const { return on[s1 + 1][s2 + 1]; }
};

// Entries in CSR order over slots 3 * n + sigma0 + 1, sorted by (n, sigma0, k, sigma1, sigma2).
struct TriadBlock {
  std::vector<std::uint32_t> offsets;
  std::vector<std::int32_t> gidx, hidx;  // 3 * k + sigma1 + 1, 3 * m + sigma2 + 1
  std::vector<cplx> coeff;
  std::vector<double> omega;
  std::vector<double> inv_omega;  // non-resonant block only
  std::vector<std::uint8_t> code;

  std::size_t size() const { return coeff.size(); }
  kernels::TriadSpan span(bool scaled = false) const;

  struct Entry {
    int n, k, m;
    SigmaTriple sigma;
    cplx coeff;
    double omega;
  };
  Entry entry(std::size_t e) const;  // n recovered by offset search
};

constexpr double kCoefficientCutoff = 1e-14;

struct TableOptions {
  bool nonresonant = true;  // the non-resonant block is large; limit runs do not need it
};

class TriadTable {
 public:
  static TriadTable build(const FrequencySet& set, const std::vector<CrayaHerringFrame>& frames,
                          TableOptions opt = {});

  const TriadBlock& resonant() const { return res_; }
  const TriadBlock& nonresonant() const { return non_; }
  bool has_nonresonant() const { return has_non_; }
  std::size_t modes() const { return modes_; }
  std::uint64_t set_hash() const { return set_hash_; }
  double min_abs_omega() const { return min_omega_; }
  double max_abs_omega() const { return max_omega_; }
  const std::vector<double>& mode_omega() const { return mode_omega_; }

  void save(const std::string& path) const;
  // Throws std::runtime_error on a missing file, bad header or key mismatch.
  static TriadTable load(const std::string& path, const FrequencySet& set);
  // Loads a matching cache or builds and stores one.
  static TriadTable cached(const std::string& path, const FrequencySet& set,
                           const std::vector<CrayaHerringFrame>& frames, TableOptions opt = {});

  bool operator==(const TriadTable& o) const;

 private:
  TriadBlock res_, non_;
  bool has_non_ = false;
  std::size_t modes_ = 0;
  std::uint64_t set_hash_ = 0;
  double min_omega_ = 0.0, max_omega_ = 0.0;
  std::vector<double> mode_omega_;
};

// Interaction coefficient -i (q^{s1}_k . m)(q^{s2}_m . conj(q^{s0}_n)).
cplx triad_coefficient(const CrayaHerringFrame& fn, const CrayaHerringFrame& fk,
                       const CrayaHerringFrame& fm, const std::array<double, 3>& m_vec, SigmaTriple s);

std::vector<cplx> apply_bbar(const TriadTable& table, const AmplitudeState& g, const AmplitudeState& h,
                             int sigma0, const PairSet& allowed);
std::vector<cplx> apply_btilde(const TriadTable& table, double Nt, const AmplitudeState& g,
                               const AmplitudeState& h, int sigma0);
std::vector<cplx> apply_bscript(const TriadTable& table, double Nt, const AmplitudeState& g,
                                const AmplitudeState& h, int sigma0, double N);

// Same forms for all three sigma0 at once, flat like AmplitudeState::c.
// weight[code] scales entries of each (sigma0, sigma1, sigma2).
std::vector<cplx> bbar_all(const TriadTable& table, const AmplitudeState& g, const AmplitudeState& h,
                           const std::array<double, 27>& weight);
std::vector<cplx> btilde_all(const TriadTable& table, double Nt, const AmplitudeState& g,
                             const AmplitudeState& h);

std::array<double, 27> weights_all();
// Pairs kept by the limit system; the c^0 cancelling pair is optional.
std::array<double, 27> weights_limit(bool keep_cancelling_pair = true);

struct LimitOptions {
  bool keep_cancelling_pair = true;
};

// Linear dissipation -mu_{sigma0} |n|^2 c added to a derivative.
void add_dissipation(const FrequencySet& set, const PhysicalParams& p, const AmplitudeState& state,
                     std::vector<cplx>& d);

AmplitudeState rhs_full(const FrequencySet& set, const TriadTable& table, const AmplitudeState& state,
                        double t, const PhysicalParams& p);
AmplitudeState rhs_limit(const FrequencySet& set, const TriadTable& table, const AmplitudeState& state,
                         const PhysicalParams& p, LimitOptions opt = {});
AmplitudeState rhs_remainder(const FrequencySet& set, const TriadTable& table, const AmplitudeState& r,
                             const AmplitudeState& c, const AmplitudeState& b, double t,
                             const PhysicalParams& p);

// Unsplit projected convolution evaluated in physical-vector form:
//   d c^{s0}_n = e^{-i s0 w_n N t} (N_n . conj(q^{s0}_n)),  N_n = -i sum (v_k . m) v_m.
// The second route for the full nonlinearity, and the fast path for time stepping.
class DirectConvolution {
 public:
  DirectConvolution(const FrequencySet& set, const std::vector<CrayaHerringFrame>& frames,
                    kernels::Isa isa = kernels::active());

  // Nonlinear part only. hermitian = true assumes the reconstructed field is real
  // and evaluates half of the outputs.
  void nonlinear(const AmplitudeState& state, double t, double N, std::vector<cplx>& out,
                 bool hermitian = false);
  // Physical-vector nonlinearity N_n for a given v-hat (for tests).
  std::vector<Vec4c> convolve(const std::vector<Vec4c>& vhat, bool hermitian = false);

  kernels::Isa isa() const { return isa_; }
  void set_isa(kernels::Isa isa) { isa_ = isa; }

 private:
  const FrequencySet& set_;
  const std::vector<CrayaHerringFrame>& frames_;
  kernels::Isa isa_;
  kernels::BoxLayout layout_;
  std::vector<double> buf_;  // 16 padded cube arrays
  std::vector<int> n_all_, n_half_;
  std::vector<cplx> acc_;
  std::vector<Vec4c> vhat_;
  void load(const std::vector<Vec4c>& vhat);
  void run(bool hermitian);
};

// v-hat_n = sum_sigma e^{i sigma w_n N t} c^sigma_n q^sigma_n
std::vector<Vec4c> physical_coefficients(const FrequencySet& set,
                                         const std::vector<CrayaHerringFrame>& frames,
                                         const AmplitudeState& state, double t, double N);

}  // namespace nsb
