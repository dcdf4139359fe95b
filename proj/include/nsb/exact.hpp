// Exact arithmetic for resonance decisions: checked 128-bit integers with a
// big-integer fallback, and the ring Z[sqrt2, sqrt3] used by oblique lattices.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nsb::exact {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct Overflow : std::overflow_error {
  Overflow() : std::overflow_error("int128 overflow") {}
};

// Signed 128-bit integer whose arithmetic throws Overflow instead of wrapping.
struct Checked128 {
  __int128 v = 0;

  Checked128() = default;
  Checked128(long long x) : v(x) {}  // NOLINT(google-explicit-constructor)
  static Checked128 raw(__int128 x) {
    Checked128 c;
    c.v = x;
    return c;
  }

  friend Checked128 operator+(Checked128 a, Checked128 b) {
    __int128 r;
    if (__builtin_add_overflow(a.v, b.v, &r)) throw Overflow();
    return raw(r);
  }
  friend Checked128 operator-(Checked128 a, Checked128 b) {
    __int128 r;
    if (__builtin_sub_overflow(a.v, b.v, &r)) throw Overflow();
    return raw(r);
  }
  friend Checked128 operator*(Checked128 a, Checked128 b) {
    __int128 r;
    if (__builtin_mul_overflow(a.v, b.v, &r)) throw Overflow();
    return raw(r);
  }
  Checked128 operator-() const { return Checked128(0) - *this; }
  friend bool operator==(Checked128 a, Checked128 b) { return a.v == b.v; }
  friend bool operator<(Checked128 a, Checked128 b) { return a.v < b.v; }
  friend bool operator>(Checked128 a, Checked128 b) { return a.v > b.v; }
};

inline int sign_of(const Checked128& x) { return (x.v > 0) - (x.v < 0); }
inline int sign_of(const BigInt& x) { return x.sign(); }
inline double to_double(const Checked128& x) { return static_cast<double>(x.v); }
inline double to_double(const BigInt& x) { return x.convert_to<double>(); }
inline BigInt to_big(const Checked128& x) {
  // cpp_int has no __int128 constructor on every Boost release; split by halves.
  const bool neg = x.v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(x.v + 1)) + 1
                            : static_cast<unsigned __int128>(x.v);
  BigInt r = static_cast<std::uint64_t>(u >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(u);
  return neg ? BigInt(-r) : r;
}
inline BigInt to_big(const BigInt& x) { return x; }

// a + b*sqrt2 + c*sqrt3 + d*sqrt6
template <class T>
struct QuadInt {
  T a{0}, b{0}, c{0}, d{0};

  QuadInt() = default;
  QuadInt(T a_) : a(a_) {}  // NOLINT(google-explicit-constructor)
  QuadInt(T a_, T b_, T c_, T d_) : a(a_), b(b_), c(c_), d(d_) {}

  friend QuadInt operator+(const QuadInt& x, const QuadInt& y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
  }
  friend QuadInt operator-(const QuadInt& x, const QuadInt& y) {
    return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
  }
  friend QuadInt operator*(const QuadInt& x, const QuadInt& y) {
    const T two = 2, three = 3, six = 6;
    return {x.a * y.a + two * x.b * y.b + three * x.c * y.c + six * x.d * y.d,
            x.a * y.b + x.b * y.a + three * x.c * y.d + three * x.d * y.c,
            x.a * y.c + x.c * y.a + two * x.b * y.d + two * x.d * y.b,
            x.a * y.d + x.d * y.a + x.b * y.c + x.c * y.b};
  }
  friend bool operator==(const QuadInt& x, const QuadInt& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
  bool is_zero() const { return *this == QuadInt{}; }
  bool is_integer() const { return b == T{0} && c == T{0} && d == T{0}; }
};

// sign of p + q*sqrt2
template <class T>
int sign_sqrt2(const T& p, const T& q) {
  const int sp = sign_of(p), sq = sign_of(q);
  if (sq == 0) return sp;
  if (sp == 0 || sp == sq) return sq;
  // opposite signs: compare p^2 against 2q^2
  const int cmp = sign_of(T(p * p - T(2) * q * q));
  return sp > 0 ? cmp : -cmp;
}

// Exact sign of an element of Z[sqrt2, sqrt3].
template <class T>
int sign_of(const QuadInt<T>& x) {
  // x = X + Y*sqrt3 with X = a + b*sqrt2, Y = c + d*sqrt2
  const int sx = sign_sqrt2(x.a, x.b);
  const int sy = sign_sqrt2(x.c, x.d);
  if (sy == 0) return sx;
  if (sx == 0 || sx == sy) return sy;
  // X^2 - 3Y^2 in Z[sqrt2]
  const T p = x.a * x.a + T(2) * x.b * x.b - T(3) * x.c * x.c - T(6) * x.d * x.d;
  const T q = T(2) * x.a * x.b - T(6) * x.c * x.d;
  const int cmp = sign_sqrt2(p, q);
  return sx > 0 ? cmp : -cmp;
}

template <class T>
double to_double(const QuadInt<T>& x) {
  return to_double(x.a) + std::sqrt(2.0) * to_double(x.b) + std::sqrt(3.0) * to_double(x.c) +
         std::sqrt(6.0) * to_double(x.d);
}

template <class T>
QuadInt<BigInt> to_big(const QuadInt<T>& x) {
  return {to_big(x.a), to_big(x.b), to_big(x.c), to_big(x.d)};
}

std::string to_string(const QuadInt<BigInt>& x);

// Parses "p/q" or an integer literal; throws std::invalid_argument.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

}  // namespace nsb::exact
