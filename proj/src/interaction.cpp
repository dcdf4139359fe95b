#include "nsb/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace nsb {

namespace {
constexpr cplx I{0.0, 1.0};

cplx dot3(const Vec4c& q, const std::array<double, 3>& m) { return q[0] * m[0] + q[1] * m[1] + q[2] * m[2]; }

void require_aligned(const TriadTable& table, const AmplitudeState& s) {
  if (s.modes() != table.modes()) throw std::invalid_argument("state is not aligned with the triad table");
}

// e^{i sigma w N t} c^sigma, the amplitude rotated to the a-variables
AmplitudeState rotate(const std::vector<double>& omega, const AmplitudeState& s, double Nt) {
  AmplitudeState r(s.modes(), s.t);
  for (std::size_t i = 0; i < s.modes(); ++i) {
    const cplx ph = std::polar(1.0, omega[i] * Nt);
    r.c[3 * i] = s.c[3 * i] * std::conj(ph);
    r.c[3 * i + 1] = s.c[3 * i + 1];
    r.c[3 * i + 2] = s.c[3 * i + 2] * ph;
  }
  return r;
}

std::vector<cplx> unrotate(const std::vector<double>& omega, std::vector<cplx> d, double Nt) {
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const cplx ph = std::polar(1.0, omega[i] * Nt);
    d[3 * i] *= ph;
    d[3 * i + 2] *= std::conj(ph);
  }
  return d;
}

std::vector<cplx> run_block(const TriadBlock& b, const std::array<double, 27>& w, const AmplitudeState& g,
                            const AmplitudeState& h, bool scaled) {
  std::vector<cplx> out(g.c.size());
  if (b.size() == 0 && b.offsets.empty()) return out;
  kernels::triad_accumulate(kernels::active(), b.span(scaled), w.data(), g.c.data(), h.c.data(), out.data());
  return out;
}

std::vector<cplx> pick(const std::vector<cplx>& all, int sigma0) {
  std::vector<cplx> out(all.size() / 3);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = all[3 * i + sigma0 + 1];
  return out;
}

std::array<double, 27> weights_for(int sigma0, const PairSet& allowed) {
  std::array<double, 27> w{};
  for (int s1 = -1; s1 <= 1; ++s1)
    for (int s2 = -1; s2 <= 1; ++s2)
      if (allowed.has(s1, s2)) w[SigmaTriple{sigma0, s1, s2}.code()] = 1.0;
  return w;
}

void add_to(std::vector<cplx>& acc, const std::vector<cplx>& x) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += x[i];
}

}  // namespace

PairSet PairSet::all() {
  PairSet p;
  for (auto& row : p.on) row.fill(true);
  return p;
}

kernels::TriadSpan TriadBlock::span(bool scaled) const {
  return {offsets.data(), offsets.empty() ? 0 : offsets.size() - 1, gidx.data(), hidx.data(),
          coeff.data(), code.data(), scaled ? inv_omega.data() : nullptr};
}

TriadBlock::Entry TriadBlock::entry(std::size_t e) const {
  const auto it = std::upper_bound(offsets.begin(), offsets.end(), static_cast<std::uint32_t>(e));
  const int slot = static_cast<int>(it - offsets.begin()) - 1;
  const SigmaTriple s = SigmaTriple::from_code(code[e]);
  return {slot / 3, (gidx[e] - (s.s1 + 1)) / 3, (hidx[e] - (s.s2 + 1)) / 3, s, coeff[e], omega[e]};
}

cplx triad_coefficient(const CrayaHerringFrame& fn, const CrayaHerringFrame& fk, const CrayaHerringFrame& fm,
                       const std::array<double, 3>& m_vec, SigmaTriple s) {
  return -I * dot3(fk.q(s.s1), m_vec) * inner(fm.q(s.s2), fn.q(s.s0));
}

TriadTable TriadTable::build(const FrequencySet& set, const std::vector<CrayaHerringFrame>& frames,
                             TableOptions opt) {
  if (frames.size() != set.size()) throw std::invalid_argument("frames are not aligned with the set");
  TriadTable t;
  t.modes_ = set.size();
  t.set_hash_ = set.hash();
  t.has_non_ = opt.nonresonant;
  t.mode_omega_.resize(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) t.mode_omega_[i] = frames[i].omega;
  t.min_omega_ = std::numeric_limits<double>::infinity();
  t.max_omega_ = 0.0;

  struct Pending {
    int k, m, code;
    cplx coeff;
    double omega;
  };
  std::array<std::vector<Pending>, 3> res, non;
  const auto flush = [](TriadBlock& b, std::vector<Pending>& p) {
    for (const auto& e : p) {
      const SigmaTriple s = SigmaTriple::from_code(e.code);
      b.gidx.push_back(3 * e.k + s.s1 + 1);
      b.hidx.push_back(3 * e.m + s.s2 + 1);
      b.coeff.push_back(e.coeff);
      b.omega.push_back(e.omega);
      b.code.push_back(static_cast<std::uint8_t>(e.code));
    }
    b.offsets.push_back(static_cast<std::uint32_t>(b.coeff.size()));
    p.clear();
  };
  t.res_.offsets.push_back(0);
  t.non_.offsets.push_back(0);

  const int M = set.M();
  for (int in = 0; in < static_cast<int>(set.size()); ++in) {
    const FrequencyIndex n = set[in];
    for (int a = std::max(-M, n.n1 - M); a <= std::min(M, n.n1 + M); ++a)
      for (int b = std::max(-M, n.n2 - M); b <= std::min(M, n.n2 + M); ++b)
        for (int c = std::max(-M, n.n3 - M); c <= std::min(M, n.n3 + M); ++c) {
          const FrequencyIndex kk{a, b, c};
          const FrequencyIndex mm = n - kk;
          if (kk.is_zero() || mm.is_zero()) continue;
          const int ik = set.index_of(kk), im = set.index_of(mm);
          const auto& mvec = set.wavevector(im);
          std::array<cplx, 3> km;
          for (int s1 = -1; s1 <= 1; ++s1) km[s1 + 1] = dot3(frames[ik].q(s1), mvec);
          for (int s0 = -1; s0 <= 1; ++s0)
            for (int s1 = -1; s1 <= 1; ++s1)
              for (int s2 = -1; s2 <= 1; ++s2) {
                const cplx coeff = -I * km[s1 + 1] * inner(frames[im].q(s2), frames[in].q(s0));
                if (std::abs(coeff) <= kCoefficientCutoff) continue;
                const SigmaTriple s{s0, s1, s2};
                const bool resonant = resonant_exact(set.squares(in), set.squares(ik), set.squares(im), s);
                if (resonant) {
                  res[s0 + 1].push_back({ik, im, s.code(), coeff, 0.0});
                } else {
                  const double w = -s0 * frames[in].omega + s1 * frames[ik].omega + s2 * frames[im].omega;
                  t.min_omega_ = std::min(t.min_omega_, std::abs(w));
                  t.max_omega_ = std::max(t.max_omega_, std::abs(w));
                  if (opt.nonresonant) non[s0 + 1].push_back({ik, im, s.code(), coeff, w});
                }
              }
        }
    for (int s = 0; s < 3; ++s) {
      flush(t.res_, res[s]);
      flush(t.non_, non[s]);
    }
  }
  t.non_.inv_omega.resize(t.non_.omega.size());
  for (std::size_t e = 0; e < t.non_.omega.size(); ++e) t.non_.inv_omega[e] = 1.0 / t.non_.omega[e];
  if (!std::isfinite(t.min_omega_)) t.min_omega_ = 0.0;
  return t;
}

// ---- cache ----

namespace {
constexpr char kMagic[8] = {'N', 'S', 'B', 'T', 'R', 'I', 'A', 'D'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, const T& x) {
  os.write(reinterpret_cast<const char*>(&x), sizeof(T));
}
template <class T>
void put_vec(std::ostream& os, const std::vector<T>& v) {
  put<std::uint64_t>(os, v.size());
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}
template <class T>
T get(std::istream& is) {
  T x{};
  is.read(reinterpret_cast<char*>(&x), sizeof(T));
  if (!is) throw std::runtime_error("triad cache truncated");
  return x;
}
template <class T>
void get_vec(std::istream& is, std::vector<T>& v) {
  const auto n = get<std::uint64_t>(is);
  v.resize(n);
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
  if (!is) throw std::runtime_error("triad cache truncated");
}
void put_block(std::ostream& os, const TriadBlock& b) {
  put_vec(os, b.offsets);
  put_vec(os, b.gidx);
  put_vec(os, b.hidx);
  put_vec(os, b.coeff);
  put_vec(os, b.omega);
  put_vec(os, b.inv_omega);
  put_vec(os, b.code);
}
void get_block(std::istream& is, TriadBlock& b) {
  get_vec(is, b.offsets);
  get_vec(is, b.gidx);
  get_vec(is, b.hidx);
  get_vec(is, b.coeff);
  get_vec(is, b.omega);
  get_vec(is, b.inv_omega);
  get_vec(is, b.code);
}
}  // namespace

void TriadTable::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write triad cache " + path);
  os.write(kMagic, sizeof kMagic);
  put(os, kVersion);
  put(os, set_hash_);
  put<std::uint64_t>(os, modes_);
  put<std::uint8_t>(os, has_non_ ? 1 : 0);
  put(os, min_omega_);
  put(os, max_omega_);
  put_vec(os, mode_omega_);
  put_block(os, res_);
  put_block(os, non_);
  if (!os) throw std::runtime_error("failed writing triad cache " + path);
}

TriadTable TriadTable::load(const std::string& path, const FrequencySet& set) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open triad cache " + path);
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) throw std::runtime_error("not a triad cache: " + path);
  if (get<std::uint32_t>(is) != kVersion) throw std::runtime_error("triad cache version mismatch");
  TriadTable t;
  t.set_hash_ = get<std::uint64_t>(is);
  t.modes_ = get<std::uint64_t>(is);
  if (t.set_hash_ != set.hash() || t.modes_ != set.size())
    throw std::runtime_error("triad cache key does not match the lattice");
  t.has_non_ = get<std::uint8_t>(is) != 0;
  t.min_omega_ = get<double>(is);
  t.max_omega_ = get<double>(is);
  get_vec(is, t.mode_omega_);
  get_block(is, t.res_);
  get_block(is, t.non_);
  return t;
}

TriadTable TriadTable::cached(const std::string& path, const FrequencySet& set,
                              const std::vector<CrayaHerringFrame>& frames, TableOptions opt) {
  try {
    TriadTable t = load(path, set);
    if (t.has_non_ || !opt.nonresonant) return t;
  } catch (const std::runtime_error&) {
  }
  TriadTable t = build(set, frames, opt);
  t.save(path);
  return t;
}

bool TriadTable::operator==(const TriadTable& o) const {
  const auto same = [](const TriadBlock& a, const TriadBlock& b) {
    return a.offsets == b.offsets && a.gidx == b.gidx && a.hidx == b.hidx && a.code == b.code &&
           std::memcmp(a.coeff.data(), b.coeff.data(), a.coeff.size() * sizeof(cplx)) == 0 &&
           a.coeff.size() == b.coeff.size() && a.omega == b.omega && a.inv_omega == b.inv_omega;
  };
  return modes_ == o.modes_ && set_hash_ == o.set_hash_ && has_non_ == o.has_non_ &&
         min_omega_ == o.min_omega_ && max_omega_ == o.max_omega_ && mode_omega_ == o.mode_omega_ &&
         same(res_, o.res_) && same(non_, o.non_);
}

// ---- bilinear forms ----

std::array<double, 27> weights_all() {
  std::array<double, 27> w;
  w.fill(1.0);
  return w;
}

std::array<double, 27> weights_limit(bool keep_cancelling_pair) {
  std::array<double, 27> w{};
  w[SigmaTriple{0, 0, 0}.code()] = 1.0;
  if (keep_cancelling_pair) {
    w[SigmaTriple{0, 1, -1}.code()] = 1.0;
    w[SigmaTriple{0, -1, 1}.code()] = 1.0;
  }
  for (int s0 : {-1, 1})
    for (int s1 = -1; s1 <= 1; ++s1)
      for (int s2 = -1; s2 <= 1; ++s2) {
        const bool excluded = (s1 == 0 && s2 == 0) || (s1 == -s0 && s2 == 0) || (s1 == 0 && s2 == -s0);
        if (!excluded) w[SigmaTriple{s0, s1, s2}.code()] = 1.0;
      }
  return w;
}

std::vector<cplx> bbar_all(const TriadTable& table, const AmplitudeState& g, const AmplitudeState& h,
                           const std::array<double, 27>& weight) {
  require_aligned(table, g);
  require_aligned(table, h);
  return run_block(table.resonant(), weight, g, h, false);
}

std::vector<cplx> btilde_all(const TriadTable& table, double Nt, const AmplitudeState& g,
                             const AmplitudeState& h) {
  require_aligned(table, g);
  require_aligned(table, h);
  if (!table.has_nonresonant()) throw std::logic_error("triad table was built without non-resonant entries");
  const auto& w = table.mode_omega();
  return unrotate(w, run_block(table.nonresonant(), weights_all(), rotate(w, g, Nt), rotate(w, h, Nt), false), Nt);
}

std::vector<cplx> apply_bbar(const TriadTable& table, const AmplitudeState& g, const AmplitudeState& h,
                             int sigma0, const PairSet& allowed) {
  return pick(bbar_all(table, g, h, weights_for(sigma0, allowed)), sigma0);
}

std::vector<cplx> apply_btilde(const TriadTable& table, double Nt, const AmplitudeState& g,
                               const AmplitudeState& h, int sigma0) {
  return pick(btilde_all(table, Nt, g, h), sigma0);
}

std::vector<cplx> apply_bscript(const TriadTable& table, double Nt, const AmplitudeState& g,
                                const AmplitudeState& h, int sigma0, double N) {
  if (!(N > 0)) throw std::invalid_argument("apply_bscript requires N > 0");
  require_aligned(table, g);
  require_aligned(table, h);
  if (!table.has_nonresonant()) throw std::logic_error("triad table was built without non-resonant entries");
  const auto& w = table.mode_omega();
  auto all = unrotate(w, run_block(table.nonresonant(), weights_for(sigma0, PairSet::all()), rotate(w, g, Nt),
                                   rotate(w, h, Nt), true),
                      Nt);
  auto out = pick(all, sigma0);
  const cplx f = 1.0 / (I * N);
  for (auto& x : out) x *= f;
  return out;
}

void add_dissipation(const FrequencySet& set, const PhysicalParams& p, const AmplitudeState& state,
                     std::vector<cplx>& d) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double f = set.fsq(static_cast<int>(i));
    for (int s = -1; s <= 1; ++s) d[3 * i + s + 1] -= p.mu(s) * f * state.c[3 * i + s + 1];
  }
}

AmplitudeState rhs_full(const FrequencySet& set, const TriadTable& table, const AmplitudeState& state, double t,
                        const PhysicalParams& p) {
  AmplitudeState d(state.modes(), t);
  d.c = bbar_all(table, state, state, weights_all());
  add_to(d.c, btilde_all(table, p.N * t, state, state));
  add_dissipation(set, p, state, d.c);
  return d;
}

AmplitudeState rhs_limit(const FrequencySet& set, const TriadTable& table, const AmplitudeState& state,
                         const PhysicalParams& p, LimitOptions opt) {
  AmplitudeState d(state.modes(), state.t);
  d.c = bbar_all(table, state, state, weights_limit(opt.keep_cancelling_pair));
  add_dissipation(set, p, state, d.c);
  return d;
}

AmplitudeState rhs_remainder(const FrequencySet& set, const TriadTable& table, const AmplitudeState& r,
                             const AmplitudeState& c, const AmplitudeState& b, double t, const PhysicalParams& p) {
  AmplitudeState d(r.modes(), t);
  const auto w = weights_all();
  d.c = bbar_all(table, r, c, w);
  add_to(d.c, bbar_all(table, b, r, w));
  add_to(d.c, btilde_all(table, p.N * t, c, c));
  add_dissipation(set, p, r, d.c);
  return d;
}

// ---- direct convolution ----

std::vector<Vec4c> physical_coefficients(const FrequencySet& set, const std::vector<CrayaHerringFrame>& frames,
                                         const AmplitudeState& state, double t, double N) {
  std::vector<Vec4c> v(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const cplx ph = std::polar(1.0, frames[i].omega * N * t);
    const WaveAmplitudes a{state.c[3 * i] * std::conj(ph), state.c[3 * i + 1], state.c[3 * i + 2] * ph};
    v[i] = reconstruct(a, frames[i]);
  }
  return v;
}

DirectConvolution::DirectConvolution(const FrequencySet& set, const std::vector<CrayaHerringFrame>& frames,
                                     kernels::Isa isa)
    : set_(set), frames_(frames), isa_(isa), layout_{set.M()} {
  if (frames.size() != set.size()) throw std::invalid_argument("frames are not aligned with the set");
  buf_.assign(16 * layout_.cells(), 0.0);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& n = set[i];
    n_all_.insert(n_all_.end(), {n.n1, n.n2, n.n3});
    // ordinals below the midpoint pair with their negatives above it
    if (i < set.size() / 2) n_half_.insert(n_half_.end(), {n.n1, n.n2, n.n3});
  }
  acc_.resize(4 * set.size());
}

void DirectConvolution::load(const std::vector<Vec4c>& vhat) {
  const std::size_t cells = layout_.cells();
  double* w_re[3] = {&buf_[0], &buf_[cells], &buf_[2 * cells]};
  double* w_im[3] = {&buf_[3 * cells], &buf_[4 * cells], &buf_[5 * cells]};
  double* t_re = &buf_[6 * cells];
  double* t_im = &buf_[7 * cells];
  const Mat3& G = set_.generator();
  for (std::size_t i = 0; i < set_.size(); ++i) {
    const auto& n = set_[i];
    const int o = layout_.offset(n.n1, n.n2, n.n3);
    const int r = layout_.offset(-n.n1, -n.n2, -n.n3);
    cplx w[3];
    for (int j = 0; j < 3; ++j) w[j] = G[0][j] * vhat[i][0] + G[1][j] * vhat[i][1] + G[2][j] * vhat[i][2];
    const cplx t = w[0] * double(n.n1) + w[1] * double(n.n2) + w[2] * double(n.n3);
    for (int j = 0; j < 3; ++j) {
      w_re[j][o] = w[j].real();
      w_im[j][o] = w[j].imag();
    }
    t_re[o] = t.real();
    t_im[o] = t.imag();
    for (int c = 0; c < 4; ++c) {
      buf_[(8 + c) * cells + r] = vhat[i][c].real();
      buf_[(12 + c) * cells + r] = vhat[i][c].imag();
    }
  }
}

void DirectConvolution::run(bool hermitian) {
  const std::size_t cells = layout_.cells();
  kernels::BoxInput in{layout_,
                       {&buf_[0], &buf_[cells], &buf_[2 * cells]},
                       {&buf_[3 * cells], &buf_[4 * cells], &buf_[5 * cells]},
                       &buf_[6 * cells],
                       &buf_[7 * cells],
                       {&buf_[8 * cells], &buf_[9 * cells], &buf_[10 * cells], &buf_[11 * cells]},
                       {&buf_[12 * cells], &buf_[13 * cells], &buf_[14 * cells], &buf_[15 * cells]}};
  const auto& list = hermitian ? n_half_ : n_all_;
  kernels::box_convolve(isa_, in, list.data(), list.size() / 3, acc_.data());
  if (hermitian) {
    const std::size_t half = list.size() / 3, count = set_.size();
    // N = -i acc and N_{-n} = conj(N_n), so acc_{-n} = -conj(acc_n)
    for (std::size_t i = 0; i < half; ++i)
      for (int c = 0; c < 4; ++c) acc_[4 * (count - 1 - i) + c] = -std::conj(acc_[4 * i + c]);
  }
}

std::vector<Vec4c> DirectConvolution::convolve(const std::vector<Vec4c>& vhat, bool hermitian) {
  load(vhat);
  run(hermitian);
  std::vector<Vec4c> out(set_.size());
  for (std::size_t i = 0; i < set_.size(); ++i)
    for (int c = 0; c < 4; ++c) out[i][c] = -I * acc_[4 * i + c];
  return out;
}

void DirectConvolution::nonlinear(const AmplitudeState& state, double t, double N, std::vector<cplx>& out,
                                  bool hermitian) {
  vhat_ = physical_coefficients(set_, frames_, state, t, N);
  load(vhat_);
  run(hermitian);
  out.resize(3 * set_.size());
  for (std::size_t i = 0; i < set_.size(); ++i) {
    Vec4c Nn;
    for (int c = 0; c < 4; ++c) Nn[c] = -I * acc_[4 * i + c];
    const cplx ph = std::polar(1.0, frames_[i].omega * N * t);
    out[3 * i] = ph * inner(Nn, frames_[i].qm);
    out[3 * i + 1] = inner(Nn, frames_[i].q0);
    out[3 * i + 2] = std::conj(ph) * inner(Nn, frames_[i].qp);
  }
}

}  // namespace nsb
