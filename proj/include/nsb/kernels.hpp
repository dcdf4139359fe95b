// Inner loops of the triad sums. Each kernel has a scalar reference and an AVX2
// variant; dispatch picks one at runtime.
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>

namespace nsb::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

std::string to_string(Isa isa);
Isa isa_from_string(const std::string& s);  // "auto" resolves to best_available()
bool available(Isa isa);
Isa best_available();
Isa active();
void set_active(Isa isa);  // throws std::invalid_argument if unavailable

// Table entries in CSR form over output slots.
struct TriadSpan {
  const std::uint32_t* offsets;  // slots + 1
  std::size_t slots;
  const std::int32_t* gidx;
  const std::int32_t* hidx;
  const cplx* coeff;
  const std::uint8_t* code;   // weight-table index per entry
  const double* scale;        // optional per-entry factor
};

// out[o] = sum_e weight[code_e] * scale_e * coeff_e * g[gidx_e] * h[hidx_e]
void triad_accumulate(Isa isa, const TriadSpan& t, const double* weight, const cplx* g,
                      const cplx* h, cplx* out);

// Dense padded cube of a divergence-free 4-field. Axis 3 has stride
// side + kPad so that vector loops may overrun into zeroed cells.
constexpr int kPad = 4;

struct BoxLayout {
  int M;
  int side() const { return 2 * M + 1; }
  int stride3() const { return side() + kPad; }
  std::size_t cells() const { return static_cast<std::size_t>(side()) * side() * stride3(); }
  int offset(int a, int b, int c) const { return ((a + M) * side() + (b + M)) * stride3() + (c + M); }
};

struct BoxInput {
  BoxLayout layout;
  // k side: w = G^T v_k (first three components) and t = w . k
  const double* w_re[3];
  const double* w_im[3];
  const double* t_re;
  const double* t_im;
  // m side, reflected: r[x] = v[-x]
  const double* r_re[4];
  const double* r_im[4];
};

// acc_n = sum_{k + m = n} (n . w_k - t_k) v_m for each listed output index n.
void box_convolve(Isa isa, const BoxInput& in, const int* n_list, std::size_t count, cplx* out);

namespace scalar {
void triad_accumulate(const TriadSpan& t, const double* weight, const cplx* g, const cplx* h, cplx* out);
void box_convolve(const BoxInput& in, const int* n_list, std::size_t count, cplx* out);
}  // namespace scalar

namespace avx2 {
void triad_accumulate(const TriadSpan& t, const double* weight, const cplx* g, const cplx* h, cplx* out);
void box_convolve(const BoxInput& in, const int* n_list, std::size_t count, cplx* out);
}  // namespace avx2

}  // namespace nsb::kernels
