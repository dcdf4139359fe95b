#include "nsb/exact.hpp"

#include <sstream>
#include <stdexcept>

namespace nsb::exact {

std::string to_string(const QuadInt<BigInt>& x) {
  std::ostringstream os;
  os << x.a;
  if (x.b != 0) os << (x.b > 0 ? "+" : "") << x.b << "*sqrt2";
  if (x.c != 0) os << (x.c > 0 ? "+" : "") << x.c << "*sqrt3";
  if (x.d != 0) os << (x.d > 0 ? "+" : "") << x.d << "*sqrt6";
  return os.str();
}

Rational parse_rational(const std::string& text) {
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  const auto parse_int = [&](const std::string& s) {
    const std::string t = trim(s);
    if (t.empty()) throw std::invalid_argument("empty integer in rational '" + text + "'");
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw std::invalid_argument("bad rational '" + text + "'");
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') throw std::invalid_argument("bad rational '" + text + "'");
    return BigInt(t[0] == '+' ? t.substr(1) : t);
  };
  const auto slash = text.find('/');
  const auto dot = text.find('.');
  if (slash == std::string::npos && dot != std::string::npos) {
    const std::string frac = trim(text.substr(dot + 1));
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad rational '" + text + "'");
    std::string head = trim(text.substr(0, dot));
    if (head.empty() || head == "-" || head == "+") head += "0";
    const BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    const BigInt whole = parse_int(head);
    const BigInt part = BigInt(frac);
    const bool neg = trim(text)[0] == '-';
    return Rational(whole * scale + (neg ? -part : part), scale);
  }
  if (slash == std::string::npos) return Rational(parse_int(text));
  const BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r) << '/' << denominator(r);
  return os.str();
}

}  // namespace nsb::exact
