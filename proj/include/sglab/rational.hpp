#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <string>

#include "sglab/circle.hpp"

namespace sglab {

using BigInt = boost::multiprecision::cpp_int;

// Exact point of S^1: num/den with gcd(num,den) = 1 and 0 <= num < den.
// The oracle arm of every float computation runs on these.
struct RationalPoint {
  BigInt num = 0;
  BigInt den = 1;

  RationalPoint() = default;
  RationalPoint(BigInt n, BigInt d) : num(std::move(n)), den(std::move(d)) { normalize(); }
  RationalPoint(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den < 0) {
      den = -den;
      num = -num;
    }
    num %= den;
    if (num < 0) num += den;
    BigInt g = boost::multiprecision::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const { return num.convert_to<double>() / den.convert_to<double>(); }
  CirclePoint to_point() const { return circle_point(to_double()); }

  bool operator==(const RationalPoint& o) const { return num == o.num && den == o.den; }
  bool operator<(const RationalPoint& o) const { return num * o.den < o.num * den; }

  std::string str() const { return num.str() + "/" + den.str(); }
};

// Exact value of a finite double as a rational (mantissa over power of two).
// Only defined for finite inputs in [0, 1].
struct DyadicValue {
  BigInt num;
  BigInt den;  // power of two

  explicit DyadicValue(double v) {
    int exp = 0;
    double m = std::frexp(v, &exp);  // v = m * 2^exp, |m| in [0.5, 1)
    std::int64_t mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    num = mant;
    den = 1;
    int shift = 53 - exp;
    if (shift >= 0) {
      den <<= shift;
    } else {
      num <<= -shift;
    }
  }
};

// p < v for exact rational p against the exact value of the double v.
inline bool rational_less(const RationalPoint& p, double v) {
  DyadicValue d(v);
  return p.num * d.den < d.num * p.den;
}

inline bool rational_less_equal(const RationalPoint& p, double v) {
  DyadicValue d(v);
  return p.num * d.den <= d.num * p.den;
}

// Exact half-open membership of a rational point in a set of double-endpoint
// arcs. Arc endpoints are finite doubles, hence exact dyadic rationals.
inline bool arcset_contains_exact(const ArcSet& set, const RationalPoint& p) {
  for (const Arc& a : set.arcs()) {
    if (a.length >= 1.0) return true;
    if (!rational_less(p, a.start) && rational_less(p, a.start + a.length)) return true;
  }
  return false;
}

}  // namespace sglab
