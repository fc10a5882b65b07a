#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace anarchia {

// Exact rational on 64-bit numerator/denominator. Congestions are sums of
// player weights and must compare exactly, so no floating point here.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::domain_error("rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  bool is_zero() const { return num == 0; }
  bool is_positive() const { return num > 0; }

  // "3", "-1/2" and decimal forms like "0.25" are accepted.
  static Rational parse(const std::string& s);
};

namespace detail {

inline long long narrow128(__int128 v, const char* what) {
  if (v > static_cast<__int128>(INT64_MAX) || v < static_cast<__int128>(INT64_MIN))
    throw std::overflow_error(std::string("rational overflow in ") + what);
  return static_cast<long long>(v);
}

inline Rational make128(__int128 n, __int128 d, const char* what) {
  if (d == 0) throw std::domain_error("rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 a = n < 0 ? -n : n;
  __int128 b = d;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  Rational r;
  r.num = narrow128(n, what);
  r.den = narrow128(d, what);
  return r;
}

}  // namespace detail

inline Rational operator+(const Rational& a, const Rational& b) {
  return detail::make128(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
                         static_cast<__int128>(a.den) * b.den, "+");
}

inline Rational operator-(const Rational& a, const Rational& b) {
  return detail::make128(static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den,
                         static_cast<__int128>(a.den) * b.den, "-");
}

inline Rational operator*(const Rational& a, const Rational& b) {
  return detail::make128(static_cast<__int128>(a.num) * b.num, static_cast<__int128>(a.den) * b.den, "*");
}

inline Rational operator/(const Rational& a, const Rational& b) {
  if (b.num == 0) throw std::domain_error("rational: division by zero");
  return detail::make128(static_cast<__int128>(a.num) * b.den, static_cast<__int128>(a.den) * b.num, "/");
}

inline bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
inline bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
inline bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}
inline bool operator>(const Rational& a, const Rational& b) { return b < a; }
inline bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
inline bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

inline Rational Rational::parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("rational: empty string");
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      long long n = std::stoll(s.substr(0, slash));
      long long d = std::stoll(s.substr(slash + 1));
      return Rational(n, d);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(s));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    if (frac_len > 18) throw std::invalid_argument("rational: too many decimal places: " + s);
    long long n = std::stoll(digits);
    long long d = 1;
    for (size_t i = 0; i < frac_len; ++i) d *= 10;
    return Rational(n, d);
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("rational: out of range: " + s);
  }
}

}  // namespace anarchia
