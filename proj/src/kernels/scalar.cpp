#include "nsb/kernels.hpp"

#include <algorithm>

namespace nsb::kernels::scalar {

void triad_accumulate(const TriadSpan& t, const double* weight, const cplx* g, const cplx* h, cplx* out) {
  for (std::size_t o = 0; o < t.slots; ++o) {
    double re = 0.0, im = 0.0;
    for (std::uint32_t e = t.offsets[o]; e < t.offsets[o + 1]; ++e) {
      double w = weight[t.code[e]];
      if (t.scale) w *= t.scale[e];
      const cplx gh = g[t.gidx[e]] * h[t.hidx[e]];
      const cplx v = t.coeff[e] * gh;
      re += w * v.real();
      im += w * v.imag();
    }
    out[o] = {re, im};
  }
}

void box_convolve(const BoxInput& in, const int* n_list, std::size_t count, cplx* out) {
  const BoxLayout& L = in.layout;
  const int M = L.M;
  const int origin = L.offset(0, 0, 0);
  for (std::size_t q = 0; q < count; ++q) {
    const int n1 = n_list[3 * q], n2 = n_list[3 * q + 1], n3 = n_list[3 * q + 2];
    const int shift = origin - L.offset(n1, n2, n3);
    double are[4] = {0, 0, 0, 0}, aim[4] = {0, 0, 0, 0};
    const int lo3 = std::max(-M, n3 - M), hi3 = std::min(M, n3 + M);
    for (int k1 = std::max(-M, n1 - M); k1 <= std::min(M, n1 + M); ++k1)
      for (int k2 = std::max(-M, n2 - M); k2 <= std::min(M, n2 + M); ++k2) {
        const int base = L.offset(k1, k2, lo3);
        for (int j = 0; j <= hi3 - lo3; ++j) {
          const int ok = base + j, om = ok + shift;
          const double sre = n1 * in.w_re[0][ok] + n2 * in.w_re[1][ok] + n3 * in.w_re[2][ok] - in.t_re[ok];
          const double sim = n1 * in.w_im[0][ok] + n2 * in.w_im[1][ok] + n3 * in.w_im[2][ok] - in.t_im[ok];
          for (int c = 0; c < 4; ++c) {
            const double vre = in.r_re[c][om], vim = in.r_im[c][om];
            are[c] += sre * vre - sim * vim;
            aim[c] += sre * vim + sim * vre;
          }
        }
      }
    for (int c = 0; c < 4; ++c) out[4 * q + c] = {are[c], aim[c]};
  }
}

}  // namespace nsb::kernels::scalar
