#include "nsb/basis.hpp"

#include <cmath>
#include <string>

namespace nsb {

namespace {
constexpr cplx I{0.0, 1.0};

std::array<double, 3> physical(const FrequencyIndex& n, const DilationFactors& d, LatticeKind kind) {
  if (n.is_zero()) throw std::invalid_argument("zero mode has no frame");
  const Mat3 G = generator_matrix(kind, d);
  std::array<double, 3> k{};
  for (int r = 0; r < 3; ++r) k[r] = G[r][0] * n.n1 + G[r][1] * n.n2 + G[r][2] * n.n3;
  return k;
}
}  // namespace

CrayaHerringFrame frame(const std::array<double, 3>& k, bool hzero) {
  CrayaHerringFrame f;
  const double r2 = std::sqrt(2.0);
  f.horizontal_zero = hzero;
  if (hzero) {
    f.qp = {0.5, 0.5, 0.0, 1.0 / r2};
    f.qm = {-0.5, -0.5, 0.0, 1.0 / r2};
    f.q0 = {-1.0 / r2, 1.0 / r2, 0.0, 0.0};
    f.qdiv = {0.0, 0.0, 1.0, 0.0};
    f.omega = 0.0;
    return f;
  }
  const double x = k[0], y = k[1], z = k[2];
  const double hsq = x * x + y * y;
  const double h = std::sqrt(hsq), full = std::sqrt(hsq + z * z);
  f.omega = h / full;
  const double w = f.omega;
  f.qp = {I * (w * x * z / (r2 * hsq)), I * (w * y * z / (r2 * hsq)), -I * (w / r2), 1.0 / r2};
  for (int j = 0; j < 4; ++j) f.qm[j] = std::conj(f.qp[j]);
  f.q0 = {-y / h, x / h, 0.0, 0.0};
  f.qdiv = {x / full, y / full, z / full, 0.0};
  return f;
}

CrayaHerringFrame frame(const FrequencySet& set, int ordinal) {
  CrayaHerringFrame f = frame(set.wavevector(ordinal), set.horizontal_zero(ordinal));
  if (!f.horizontal_zero) f.omega = set.omega(ordinal);
  return f;
}

CrayaHerringFrame frame(const FrequencyIndex& n, const DilationFactors& d, LatticeKind kind) {
  const ScaledSquares sq = scaled_squares(kind, n, d);
  CrayaHerringFrame f = frame(physical(n, d, kind), sq.h.is_zero());
  if (!f.horizontal_zero) f.omega = std::sqrt(exact::to_double(sq.h) / exact::to_double(sq.f));
  return f;
}

Mat4 extended_leray(const std::array<double, 3>& k) {
  Mat4 P{};
  const double fsq = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) P[i][j] = (i == j) ? 1.0 : 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) P[i][j] -= k[i] * k[j] / fsq;
  return P;
}

Mat4 extended_leray(const FrequencyIndex& n, const DilationFactors& d, LatticeKind kind) {
  return extended_leray(physical(n, d, kind));
}

Mat4 coupling_matrix() {
  Mat4 J{};
  J[2][3] = -1.0;
  J[3][2] = 1.0;
  return J;
}

Mat4 wave_matrix(const std::array<double, 3>& k) {
  const Mat4 P = extended_leray(k);
  return multiply(P, multiply(coupling_matrix(), P));
}

Mat4 wave_matrix(const FrequencyIndex& n, const DilationFactors& d, LatticeKind kind) {
  return wave_matrix(physical(n, d, kind));
}

cplx inner(const Vec4c& a, const Vec4c& b) {
  cplx s = 0.0;
  for (int j = 0; j < 4; ++j) s += a[j] * std::conj(b[j]);
  return s;
}

WaveAmplitudes decompose(const Vec4c& vhat, const CrayaHerringFrame& f, double tol_div,
                         const char* mode_label) {
  double norm = 0.0;
  for (const cplx& v : vhat) norm += std::norm(v);
  norm = std::sqrt(norm);
  const double div = std::abs(inner(vhat, f.qdiv));
  if (div > tol_div * norm)
    throw DivergenceError("divergence violation " + std::to_string(div / norm) + " at mode " +
                          (mode_label ? mode_label : "?"));
  return {inner(vhat, f.qm), inner(vhat, f.q0), inner(vhat, f.qp)};
}

Vec4c reconstruct(const WaveAmplitudes& a, const CrayaHerringFrame& f) {
  Vec4c v{};
  for (int j = 0; j < 4; ++j) v[j] = a.am * f.qm[j] + a.a0 * f.q0[j] + a.ap * f.qp[j];
  return v;
}

HelmholtzParts helmholtz_decompose(const Vec3c& uhat, const std::array<double, 3>& k) {
  const double fsq = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  const cplx kdotu = k[0] * uhat[0] + k[1] * uhat[1] + k[2] * uhat[2];
  HelmholtzParts out;
  for (int j = 0; j < 3; ++j) out.solenoidal[j] = uhat[j] - k[j] * kdotu / fsq;
  out.potential = -I * kdotu / fsq;
  return out;
}

HelmholtzParts helmholtz_decompose(const Vec3c& uhat, const FrequencyIndex& n,
                                   const DilationFactors& d, LatticeKind kind) {
  return helmholtz_decompose(uhat, physical(n, d, kind));
}

std::vector<CrayaHerringFrame> frame_cache(const FrequencySet& set) {
  std::vector<CrayaHerringFrame> out(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) out[i] = frame(set, static_cast<int>(i));
  return out;
}

Vec4c apply(const Mat4& A, const Vec4c& v) {
  Vec4c r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i] += A[i][j] * v[j];
  return r;
}

Mat4 multiply(const Mat4& A, const Mat4& B) {
  Mat4 C{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int l = 0; l < 4; ++l) C[i][j] += A[i][l] * B[l][j];
  return C;
}

}  // namespace nsb
