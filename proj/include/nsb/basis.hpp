// Craya-Herring eigenframe of the stratification operator and amplitude maps.
#pragma once

#include "nsb/lattice.hpp"

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

namespace nsb {

using cplx = std::complex<double>;
using Vec4c = std::array<cplx, 4>;
using Vec3c = std::array<cplx, 3>;
using Mat4 = std::array<std::array<double, 4>, 4>;

struct CrayaHerringFrame {
  Vec4c qp, qm, q0, qdiv;
  double omega = 0.0;
  bool horizontal_zero = false;

  // Branch vector for sigma in {-1, 0, 1}.
  const Vec4c& q(int sigma) const { return sigma > 0 ? qp : (sigma < 0 ? qm : q0); }
};

struct WaveAmplitudes {
  cplx am, a0, ap;

  cplx& operator[](int sigma) { return sigma > 0 ? ap : (sigma < 0 ? am : a0); }
  cplx operator[](int sigma) const { return sigma > 0 ? ap : (sigma < 0 ? am : a0); }
};

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Frame from a dilated physical wavevector; hzero selects the constant branch.
CrayaHerringFrame frame(const std::array<double, 3>& k, bool hzero);
CrayaHerringFrame frame(const FrequencySet& set, int ordinal);
CrayaHerringFrame frame(const FrequencyIndex& n, const DilationFactors& d,
                        LatticeKind kind = LatticeKind::Cubic);

Mat4 extended_leray(const std::array<double, 3>& k);
Mat4 extended_leray(const FrequencyIndex& n, const DilationFactors& d,
                    LatticeKind kind = LatticeKind::Cubic);

// The skew coupling between vertical velocity and scaled density.
Mat4 coupling_matrix();
Mat4 wave_matrix(const std::array<double, 3>& k);
Mat4 wave_matrix(const FrequencyIndex& n, const DilationFactors& d,
                 LatticeKind kind = LatticeKind::Cubic);

constexpr double kDivergenceTolerance = 1e-10;

WaveAmplitudes decompose(const Vec4c& vhat, const CrayaHerringFrame& f,
                         double tol_div = kDivergenceTolerance, const char* mode_label = nullptr);
Vec4c reconstruct(const WaveAmplitudes& a, const CrayaHerringFrame& f);

struct HelmholtzParts {
  Vec3c solenoidal;
  cplx potential;
};
HelmholtzParts helmholtz_decompose(const Vec3c& uhat, const std::array<double, 3>& k);
HelmholtzParts helmholtz_decompose(const Vec3c& uhat, const FrequencyIndex& n,
                                   const DilationFactors& d, LatticeKind kind = LatticeKind::Cubic);

// Frames for every member of a set, aligned with its ordinals.
std::vector<CrayaHerringFrame> frame_cache(const FrequencySet& set);

// Small linear-algebra helpers shared by tests and dynamics.
Vec4c apply(const Mat4& A, const Vec4c& v);
Mat4 multiply(const Mat4& A, const Mat4& B);
// sum_j a_j * conj(b_j)
cplx inner(const Vec4c& a, const Vec4c& b);

}  // namespace nsb
