#include "nsb/resonance.hpp"

#include <cmath>
#include <iomanip>
#include <limits>

namespace nsb {

namespace {

template <class T>
struct Term {
  int coef;
  QuadInt<T> h, f;
};

template <class T>
QuadInt<T> convert(const QuadInt<Checked128>& x) {
  if constexpr (std::is_same_v<T, Checked128>) {
    return x;
  } else {
    return exact::to_big(x);
  }
}

// Decides sum_i coef_i * sqrt(h_i / f_i) == 0 for terms with h_i > 0.
template <class T>
bool decide(const std::vector<Term<T>>& t) {
  using exact::sign_of;
  switch (t.size()) {
    case 0: return true;
    case 1: return false;
    case 2:
      if (t[0].coef == t[1].coef) return false;
      return t[0].h * t[1].f == t[1].h * t[0].f;
    default: break;
  }
  int plus = 0;
  for (const auto& x : t) plus += x.coef > 0;
  if (plus == 0 || plus == 3) return false;
  // the odd-signed term must equal the sum of the other two
  const int odd_sign = plus == 1 ? 1 : -1;
  int ix = 0;
  while (t[ix].coef != odd_sign) ++ix;
  const auto& x = t[ix];
  const auto& y = t[(ix + 1) % 3];
  const auto& z = t[(ix + 2) % 3];
  const QuadInt<T> X = x.h * y.f * z.f, Y = x.f * y.h * z.f, Z = x.f * y.f * z.h;
  const QuadInt<T> E = X - Y - Z;
  if (sign_of(E) <= 0) return false;
  return E * E == QuadInt<T>(T(4)) * Y * Z;
}

template <class T>
bool resonant_as(const ScaledSquares& n, const ScaledSquares& k, const ScaledSquares& m, SigmaTriple s) {
  std::vector<Term<T>> t;
  t.reserve(3);
  const auto add = [&](int coef, const ScaledSquares& q) {
    if (coef == 0 || q.h.is_zero()) return;
    t.push_back({coef, convert<T>(q.h), convert<T>(q.f)});
  };
  add(-s.s0, n);
  add(s.s1, k);
  add(s.s2, m);
  return decide(t);
}

template <class T>
QuadInt<T> discriminant_as(const ScaledSquares& n, const ScaledSquares& k, const ScaledSquares& m) {
  const QuadInt<T> hn = convert<T>(n.h), fn = convert<T>(n.f);
  const QuadInt<T> hk = convert<T>(k.h), fk = convert<T>(k.f);
  const QuadInt<T> hm = convert<T>(m.h), fm = convert<T>(m.f);
  const QuadInt<T> A = hn * fk * fm, B = fn * hk * fm, C = fn * fk * hm;
  const QuadInt<T> E = A - B - C;
  return E * E - QuadInt<T>(T(4)) * B * C;
}

void check_sum(const FrequencyIndex& n, const FrequencyIndex& k, const FrequencyIndex& m) {
  if (n != k + m) throw std::invalid_argument("triad requires n = k + m");
  if (n.is_zero() || k.is_zero() || m.is_zero()) throw std::invalid_argument("triad modes must be nonzero");
}

double omega_of(const ScaledSquares& q) {
  if (q.h.is_zero()) return 0.0;
  return std::sqrt(exact::to_double(q.h) / exact::to_double(q.f));
}

BigInt common_den(const DilationFactors& d) { return denominator(d.g1sq) * denominator(d.g2sq); }

}  // namespace

double omega_sigma(const FrequencySet& set, int n, int k, int m, SigmaTriple s) {
  return -s.s0 * set.omega(n) + s.s1 * set.omega(k) + s.s2 * set.omega(m);
}

double omega_sigma(const FrequencyIndex& n, const FrequencyIndex& k, const FrequencyIndex& m,
                   SigmaTriple s, const DilationFactors& d, LatticeKind kind) {
  check_sum(n, k, m);
  return -s.s0 * omega_of(scaled_squares(kind, n, d)) + s.s1 * omega_of(scaled_squares(kind, k, d)) +
         s.s2 * omega_of(scaled_squares(kind, m, d));
}

bool resonant_exact(const ScaledSquares& n, const ScaledSquares& k, const ScaledSquares& m,
                    SigmaTriple s) {
  try {
    return resonant_as<Checked128>(n, k, m, s);
  } catch (const exact::Overflow&) {
    return resonant_as<BigInt>(n, k, m, s);
  }
}

ResonanceVerdict is_resonant_exact(const FrequencySet& set, int n, int k, int m, SigmaTriple s) {
  check_sum(set[n], set[k], set[m]);
  return {resonant_exact(set.squares(n), set.squares(k), set.squares(m), s),
          omega_sigma(set, n, k, m, s)};
}

ResonanceVerdict is_resonant_exact(const FrequencyIndex& n, const FrequencyIndex& k,
                                   const FrequencyIndex& m, SigmaTriple s, const DilationFactors& d,
                                   LatticeKind kind) {
  check_sum(n, k, m);
  const auto sn = scaled_squares(kind, n, d), sk = scaled_squares(kind, k, d),
             sm = scaled_squares(kind, m, d);
  return {resonant_exact(sn, sk, sm, s), omega_sigma(n, k, m, s, d, kind)};
}

Rational Discriminant::value() const {
  if (!rational()) throw std::domain_error("discriminant is irrational");
  return Rational(num.a, den);
}

int discriminant_sign(const ScaledSquares& n, const ScaledSquares& k, const ScaledSquares& m) {
  try {
    return exact::sign_of(discriminant_as<Checked128>(n, k, m));
  } catch (const exact::Overflow&) {
    return exact::sign_of(discriminant_as<BigInt>(n, k, m));
  }
}

Discriminant resonance_discriminant(const FrequencyIndex& n, const FrequencyIndex& k,
                                    const FrequencyIndex& m, const DilationFactors& d,
                                    LatticeKind kind) {
  if (n.is_zero() || k.is_zero() || m.is_zero()) throw std::invalid_argument("triad modes must be nonzero");
  Discriminant q;
  q.num = discriminant_as<BigInt>(scaled_squares(kind, n, d), scaled_squares(kind, k, d),
                                  scaled_squares(kind, m, d));
  const BigInt D = common_den(d);
  q.den = D * D * D * D * D * D;
  BigInt g = q.den;
  for (const BigInt* x : {&q.num.a, &q.num.b, &q.num.c, &q.num.d}) g = boost::multiprecision::gcd(g, *x);
  for (BigInt* x : {&q.num.a, &q.num.b, &q.num.c, &q.num.d, &q.den}) *x /= g;
  return q;
}

Discriminant resonance_polynomial(const FrequencyIndex& n, const FrequencyIndex& k,
                                  const FrequencyIndex& m, const DilationFactors& d,
                                  LatticeKind kind) {
  Discriminant q = resonance_discriminant(n, k, m, d, kind);
  q.num = q.num * q.num;
  q.den = q.den * q.den;
  return q;
}

std::size_t AdmissibilityReport::generic_rows() const {
  std::size_t c = 0;
  for (const auto& r : rows) c += r.generic;
  return c;
}

AdmissibilityReport gamma_scan(const FrequencySet& set) {
  AdmissibilityReport rep;
  for_each_triad(set, [&](int n, int k, int m) {
    const bool hn = set.horizontal_zero(n), hk = set.horizontal_zero(k), hm = set.horizontal_zero(m);
    if (hn && hk && hm) return;
    ++rep.triads_scanned;
    if (discriminant_sign(set.squares(n), set.squares(k), set.squares(m)) != 0) return;
    AdmissibilityRow row{set[n], set[k], set[m], "0", "1", !hn && !hk && !hm};
    rep.rows.push_back(row);
  });
  return rep;
}

void write_csv(std::ostream& os, const AdmissibilityReport& r) {
  os << "n1,n2,n3,k1,k2,k3,m1,m2,m3,Q_num,Q_den\n";
  for (const auto& x : r.rows)
    os << x.n.n1 << ',' << x.n.n2 << ',' << x.n.n3 << ',' << x.k.n1 << ',' << x.k.n2 << ',' << x.k.n3
       << ',' << x.m.n1 << ',' << x.m.n2 << ',' << x.m.n3 << ',' << x.q_num << ',' << x.q_den << '\n';
}

CensusResult restricted_convolution_census(const FrequencySet& set, int shell, bool fiber_check) {
  if (set.kind() != LatticeKind::Cubic || set.dilation() != DilationFactors{})
    throw std::invalid_argument("census requires the periodic cubic lattice");
  const int M = set.M(), s = set.side();
  const long long lo = 1LL << (2 * shell), hi = 1LL << (2 * shell + 2);

  // integer squared norms over the whole cube
  std::vector<long long> H(static_cast<std::size_t>(s) * s * s), F(H.size());
  for (int a = -M; a <= M; ++a)
    for (int b = -M; b <= M; ++b)
      for (int c = -M; c <= M; ++c) {
        const int o = set.cube_offset(FrequencyIndex{a, b, c});
        H[o] = 1LL * a * a + 1LL * b * b;
        F[o] = H[o] + 1LL * c * c;
      }
  const auto resonant = [](long long hn, long long fn, long long hk, long long fk, long long hm,
                           long long fm) {
    const __int128 A = static_cast<__int128>(hn) * fk * fm, B = static_cast<__int128>(fn) * hk * fm,
                   C = static_cast<__int128>(fn) * fk * hm;
    const __int128 E = A - B - C;
    return E * E == 4 * B * C;
  };

  std::vector<FrequencyIndex> shell_k;
  for (const auto& k : set.members()) {
    const long long f = 1LL * k.n1 * k.n1 + 1LL * k.n2 * k.n2 + 1LL * k.n3 * k.n3;
    if (f >= lo && f <= hi) shell_k.push_back(k);
  }
  if (shell_k.empty())
    throw EmptyShell("shell " + std::to_string(shell) + " is empty within M=" + std::to_string(M));

  CensusResult out;
  out.shell = shell;
  out.shell_size = shell_k.size();
  // Every quantity is invariant under axis reflections and the horizontal swap,
  // so n ranges over the fundamental domain n1 >= n2 >= 0, n3 >= 0.
  for (int n1 = 0; n1 <= M; ++n1)
    for (int n2 = 0; n2 <= n1; ++n2) {
      if (n1 == 0 && n2 == 0) continue;
      for (int n3 = 0; n3 <= M; ++n3) {
        const FrequencyIndex n{n1, n2, n3};
        const int on = set.cube_offset(n);
        const long long hn = H[on], fn = F[on];
        double sum = 0.0;
        for (const auto& k : shell_k) {
          const FrequencyIndex m = -n - k;
          if (!set.contains(m)) continue;
          const int ok = set.cube_offset(k), om = set.cube_offset(m);
          if (resonant(hn, fn, H[ok], F[ok], H[om], F[om])) sum += 1.0 / std::sqrt(double(F[ok]));
        }
        if (sum > out.sup_sum) {
          out.sup_sum = sum;
          out.argmax = n;
        }
        if (!fiber_check) continue;
        for (int k1 = -M; k1 <= M; ++k1)
          for (int k2 = -M; k2 <= M; ++k2) {
            int count = 0;
            for (int k3 = -M; k3 <= M; ++k3) {
              const FrequencyIndex k{k1, k2, k3};
              const FrequencyIndex m = -n - k;
              if (k.is_zero() || m.is_zero() || !set.contains(m)) continue;
              const int ok = set.cube_offset(k), om = set.cube_offset(m);
              count += resonant(hn, fn, H[ok], F[ok], H[om], F[om]);
            }
            out.max_fiber_count = std::max(out.max_fiber_count, count);
          }
      }
    }
  out.implied_constant = out.sup_sum / std::ldexp(1.0, shell);
  return out;
}

void write_csv(std::ostream& os, const std::vector<CensusResult>& rows) {
  os << "i,sup_sum,implied_constant\n";
  os << std::setprecision(17);
  for (const auto& r : rows) os << r.shell << ',' << r.sup_sum << ',' << r.implied_constant << '\n';
}

}  // namespace nsb
