// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "nsb/kernels.hpp"

#include <algorithm>

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define NSB_HAVE_AVX2 1
#endif

namespace nsb::kernels::avx2 {

#ifdef NSB_HAVE_AVX2

namespace {

// (a_re + i a_im)(b_re + i b_im) on two packed complex numbers
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d are = _mm256_movedup_pd(a);
  const __m256d aim = _mm256_permute_pd(a, 0xF);
  const __m256d bsw = _mm256_permute_pd(b, 0x5);
  return _mm256_fmaddsub_pd(are, b, _mm256_mul_pd(aim, bsw));
}

inline __m256d load2(const cplx* p, std::int32_t i0, std::int32_t i1) {
  const __m128d lo = _mm_loadu_pd(reinterpret_cast<const double*>(p + i0));
  const __m128d hi = _mm_loadu_pd(reinterpret_cast<const double*>(p + i1));
  return _mm256_insertf128_pd(_mm256_castpd128_pd256(lo), hi, 1);
}

inline double hsum(__m256d v) {
  const __m128d s = _mm_add_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void triad_accumulate(const TriadSpan& t, const double* weight, const cplx* g, const cplx* h, cplx* out) {
  for (std::size_t o = 0; o < t.slots; ++o) {
    const std::uint32_t begin = t.offsets[o], end = t.offsets[o + 1];
    __m256d acc = _mm256_setzero_pd();
    std::uint32_t e = begin;
    for (; e + 2 <= end; e += 2) {
      double w0 = weight[t.code[e]], w1 = weight[t.code[e + 1]];
      if (t.scale) {
        w0 *= t.scale[e];
        w1 *= t.scale[e + 1];
      }
      const __m256d gv = load2(g, t.gidx[e], t.gidx[e + 1]);
      const __m256d hv = load2(h, t.hidx[e], t.hidx[e + 1]);
      const __m256d cv = _mm256_loadu_pd(reinterpret_cast<const double*>(t.coeff + e));
      const __m256d wv = _mm256_setr_pd(w0, w0, w1, w1);
      acc = _mm256_fmadd_pd(wv, cmul(cv, cmul(gv, hv)), acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double re = lanes[0] + lanes[2], im = lanes[1] + lanes[3];
    for (; e < end; ++e) {
      double w = weight[t.code[e]];
      if (t.scale) w *= t.scale[e];
      const cplx v = t.coeff[e] * (g[t.gidx[e]] * h[t.hidx[e]]);
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
    const __m256d vn1 = _mm256_set1_pd(n1), vn2 = _mm256_set1_pd(n2), vn3 = _mm256_set1_pd(n3);
    __m256d are[4], aim[4];
    for (int c = 0; c < 4; ++c) are[c] = aim[c] = _mm256_setzero_pd();
    const int lo3 = std::max(-M, n3 - M), len = std::min(M, n3 + M) - lo3 + 1;
    for (int k1 = std::max(-M, n1 - M); k1 <= std::min(M, n1 + M); ++k1)
      for (int k2 = std::max(-M, n2 - M); k2 <= std::min(M, n2 + M); ++k2) {
        const int base = L.offset(k1, k2, lo3);
        for (int j = 0; j < len; j += 4) {
          const int ok = base + j, om = ok + shift;
          __m256d sre = _mm256_fmsub_pd(vn3, _mm256_loadu_pd(in.w_re[2] + ok), _mm256_loadu_pd(in.t_re + ok));
          sre = _mm256_fmadd_pd(vn2, _mm256_loadu_pd(in.w_re[1] + ok), sre);
          sre = _mm256_fmadd_pd(vn1, _mm256_loadu_pd(in.w_re[0] + ok), sre);
          __m256d sim = _mm256_fmsub_pd(vn3, _mm256_loadu_pd(in.w_im[2] + ok), _mm256_loadu_pd(in.t_im + ok));
          sim = _mm256_fmadd_pd(vn2, _mm256_loadu_pd(in.w_im[1] + ok), sim);
          sim = _mm256_fmadd_pd(vn1, _mm256_loadu_pd(in.w_im[0] + ok), sim);
          for (int c = 0; c < 4; ++c) {
            const __m256d vre = _mm256_loadu_pd(in.r_re[c] + om);
            const __m256d vim = _mm256_loadu_pd(in.r_im[c] + om);
            are[c] = _mm256_fmadd_pd(sre, vre, _mm256_fnmadd_pd(sim, vim, are[c]));
            aim[c] = _mm256_fmadd_pd(sre, vim, _mm256_fmadd_pd(sim, vre, aim[c]));
          }
        }
      }
    for (int c = 0; c < 4; ++c) out[4 * q + c] = {hsum(are[c]), hsum(aim[c])};
  }
}

#else

void triad_accumulate(const TriadSpan& t, const double* weight, const cplx* g, const cplx* h, cplx* out) {
  scalar::triad_accumulate(t, weight, g, h, out);
}
void box_convolve(const BoxInput& in, const int* n_list, std::size_t count, cplx* out) {
  scalar::box_convolve(in, n_list, count, out);
}

#endif

}  // namespace nsb::kernels::avx2
