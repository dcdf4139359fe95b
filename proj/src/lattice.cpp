#include "nsb/lattice.hpp"

#include <cmath>
#include <sstream>

namespace nsb {

std::string to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Cubic: return "cubic";
    case LatticeKind::ObliqueA: return "oblique_a";
    case LatticeKind::ObliqueB: return "oblique_b";
  }
  return "?";
}

LatticeKind lattice_kind_from_string(const std::string& s) {
  if (s == "cubic") return LatticeKind::Cubic;
  if (s == "oblique_a") return LatticeKind::ObliqueA;
  if (s == "oblique_b") return LatticeKind::ObliqueB;
  throw std::invalid_argument("unknown lattice kind '" + s + "'");
}

std::string to_string(const FrequencyIndex& n) {
  std::ostringstream os;
  os << '(' << n.n1 << ',' << n.n2 << ',' << n.n3 << ')';
  return os.str();
}

DilationFactors::DilationFactors(Rational a, Rational b) : g1sq(std::move(a)), g2sq(std::move(b)) {
  if (g1sq <= 0 || g2sq <= 0) throw std::invalid_argument("dilation squares must be positive");
}

namespace {

long long small(const BigInt& x, const char* what) {
  if (boost::multiprecision::abs(x) > BigInt(1) << 40)
    throw std::invalid_argument(std::string("dilation ") + what + " too large");
  return x.convert_to<long long>();
}

template <class T>
void forms(LatticeKind kind, const FrequencyIndex& n, const DilationFactors& d, QuadInt<T>& h,
           QuadInt<T>& f, T& den) {
  const T p1 = small(numerator(d.g1sq), "numerator"), q1 = small(denominator(d.g1sq), "denominator");
  const T p2 = small(numerator(d.g2sq), "numerator"), q2 = small(denominator(d.g2sq), "denominator");
  const T a = p1 * q2, b = p2 * q1;
  den = q1 * q2;
  const T n1 = n.n1, n2 = n.n2, n3 = n.n3;
  switch (kind) {
    case LatticeKind::Cubic:
      h = QuadInt<T>(a * n1 * n1 + b * n2 * n2);
      f = h + QuadInt<T>(den * n3 * n3);
      break;
    case LatticeKind::ObliqueA:
      h = QuadInt<T>(a * n1 * n1 + T(2) * b * n2 * n2);
      f = h + QuadInt<T>(den * n3 * n3);
      break;
    case LatticeKind::ObliqueB: {
      const T s = n1 + n2;
      h = QuadInt<T>(a * s * s + b * (T(2) * n2 * n2 + n3 * n3), T(2) * b * n2 * n3, T(0), T(0));
      f = h + QuadInt<T>(T(3) * den * n3 * n3);
      break;
    }
  }
}

}  // namespace

ScaledSquares scaled_squares(LatticeKind kind, const FrequencyIndex& n, const DilationFactors& d) {
  ScaledSquares s;
  Checked128 den;
  forms(kind, n, d, s.h, s.f, den);
  return s;
}

ModeGeometrySquares dilated_geometry(LatticeKind kind, const FrequencyIndex& n,
                                     const DilationFactors& d) {
  if (n.is_zero()) throw std::invalid_argument("dilated_geometry: zero mode");
  ModeGeometrySquares g;
  forms(kind, n, d, g.hsq_num, g.fsq_num, g.den);
  BigInt c = g.den;
  for (const BigInt* x : {&g.hsq_num.a, &g.hsq_num.b, &g.hsq_num.c, &g.hsq_num.d, &g.fsq_num.a,
                          &g.fsq_num.b, &g.fsq_num.c, &g.fsq_num.d})
    c = boost::multiprecision::gcd(c, *x);
  for (BigInt* x : {&g.hsq_num.a, &g.hsq_num.b, &g.hsq_num.c, &g.hsq_num.d, &g.fsq_num.a,
                    &g.fsq_num.b, &g.fsq_num.c, &g.fsq_num.d, &g.den})
    *x /= c;
  return g;
}

ModeGeometrySquares dilated_geometry(const FrequencyIndex& n, const DilationFactors& d) {
  return dilated_geometry(LatticeKind::Cubic, n, d);
}

Rational ModeGeometrySquares::hsq() const {
  if (!hsq_num.is_integer()) throw std::domain_error("horizontal norm is irrational");
  return Rational(hsq_num.a, den);
}

Rational ModeGeometrySquares::fsq() const {
  if (!fsq_num.is_integer()) throw std::domain_error("norm is irrational");
  return Rational(fsq_num.a, den);
}

Mat3 generator_matrix(LatticeKind kind, const DilationFactors& d) {
  const double g1 = std::sqrt(d.g1sq.convert_to<double>());
  const double g2 = std::sqrt(d.g2sq.convert_to<double>());
  const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
  switch (kind) {
    case LatticeKind::Cubic: return {{{g1, 0, 0}, {0, g2, 0}, {0, 0, 1}}};
    case LatticeKind::ObliqueA: return {{{g1, 0, 0}, {0, r2 * g2, 0}, {0, 0, 1}}};
    case LatticeKind::ObliqueB: return {{{g1, g1, 0}, {0, r2 * g2, g2}, {0, 0, r3}}};
  }
  return {};
}

FrequencySet::FrequencySet(LatticeKind kind, int M, DilationFactors dilation)
    : kind_(kind), M_(M), dilation_(std::move(dilation)) {
  if (M < 1) throw std::invalid_argument("truncation radius M must be >= 1");
  if (dilation_.g1sq <= 0 || dilation_.g2sq <= 0)
    throw std::invalid_argument("dilation squares must be positive");
  const int s = side();
  ordinal_of_cube_.assign(static_cast<std::size_t>(s) * s * s, -1);
  for (int a = -M; a <= M; ++a)
    for (int b = -M; b <= M; ++b)
      for (int c = -M; c <= M; ++c) {
        const FrequencyIndex n{a, b, c};
        if (n.is_zero()) continue;
        ordinal_of_cube_[cube_offset(n)] = static_cast<int>(members_.size());
        cube_of_.push_back(cube_offset(n));
        members_.push_back(n);
      }

  G_ = generator_matrix(kind_, dilation_);
  const std::size_t count = members_.size();
  kvec_.resize(count);
  hsq_.resize(count);
  fsq_.resize(count);
  omega_.resize(count);
  hzero_.resize(count);
  sq_.resize(count);
  Checked128 den;
  for (std::size_t i = 0; i < count; ++i) {
    const FrequencyIndex& n = members_[i];
    for (int r = 0; r < 3; ++r) kvec_[i][r] = G_[r][0] * n.n1 + G_[r][1] * n.n2 + G_[r][2] * n.n3;
    forms(kind_, n, dilation_, sq_[i].h, sq_[i].f, den);
    const double H = exact::to_double(sq_[i].h), F = exact::to_double(sq_[i].f);
    const double D = exact::to_double(den);
    hzero_[i] = sq_[i].h.is_zero() ? 1 : 0;
    hsq_[i] = hzero_[i] ? 0.0 : H / D;
    fsq_[i] = F / D;
    omega_[i] = hzero_[i] ? 0.0 : std::sqrt(H / F);
  }

  hash_ = fnv1a(descriptor().dump());
}

bool FrequencySet::contains(const FrequencyIndex& n) const { return index_of(n) >= 0; }

int FrequencySet::index_of(const FrequencyIndex& n) const {
  if (std::abs(n.n1) > M_ || std::abs(n.n2) > M_ || std::abs(n.n3) > M_) return -1;
  return ordinal_of_cube_[cube_offset(n)];
}

nlohmann::json FrequencySet::descriptor() const {
  const auto pair = [](const Rational& r) {
    return nlohmann::json::array({numerator(r).str(), denominator(r).str()});
  };
  return {{"kind", to_string(kind_)}, {"M", M_}, {"g1sq", pair(dilation_.g1sq)},
          {"g2sq", pair(dilation_.g2sq)}};
}

FrequencySet FrequencySet::from_descriptor(const nlohmann::json& j) {
  const auto rat = [](const nlohmann::json& p) {
    const auto part = [](const nlohmann::json& x) {
      return x.is_string() ? BigInt(x.get<std::string>()) : BigInt(x.get<long long>());
    };
    return Rational(part(p.at(0)), part(p.at(1)));
  };
  return FrequencySet(lattice_kind_from_string(j.at("kind").get<std::string>()), j.at("M").get<int>(),
                      DilationFactors(rat(j.at("g1sq")), rat(j.at("g2sq"))));
}

std::vector<Triad> triads(const FrequencySet& set) {
  std::vector<Triad> out;
  for_each_triad(set, [&](int n, int k, int m) { out.push_back({n, k, m}); });
  return out;
}

std::size_t triad_count(const FrequencySet& set) {
  std::size_t c = 0;
  for_each_triad(set, [&](int, int, int) { ++c; });
  return c;
}

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t seed) { return fnv1a(s.data(), s.size(), seed); }

}  // namespace nsb
