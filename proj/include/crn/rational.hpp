#pragma once

// Exact rational arithmetic used by all combinatorial / subspace computations.
// Dynamics and root-finding are the only floating-point consumers.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace crn {

using Int = boost::multiprecision::cpp_int;

inline Int int_gcd(Int a, Int b)
{
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline Int int_lcm(const Int& a, const Int& b)
{
  if (a == 0 || b == 0) return 0;
  Int g = int_gcd(a, b);
  Int r = (a / g) * b;
  return r < 0 ? -r : r;
}

// Normalized rational: den > 0, gcd(num, den) = 1.
struct Rat {
  Int num{0};
  Int den{1};

  Rat() = default;
  Rat(long long n) : num(n), den(1) {}  // NOLINT: implicit by design
  Rat(Int n) : num(std::move(n)), den(1) {}
  Rat(Int n, Int d) : num(std::move(n)), den(std::move(d)) { normalize(); }

  void normalize()
  {
    if (den == 0) throw std::domain_error("Rat: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    Int g = int_gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  bool is_zero() const { return num == 0; }
  int sign() const { return num == 0 ? 0 : (num < 0 ? -1 : 1); }

  double to_double() const
  {
    return static_cast<double>(num) / static_cast<double>(den);
  }

  std::string str() const
  {
    std::string s = num.str();
    if (den != 1) s += "/" + den.str();
    return s;
  }
};

inline Rat operator+(const Rat& a, const Rat& b)
{
  return Rat(a.num * b.den + b.num * a.den, a.den * b.den);
}
inline Rat operator-(const Rat& a, const Rat& b)
{
  return Rat(a.num * b.den - b.num * a.den, a.den * b.den);
}
inline Rat operator*(const Rat& a, const Rat& b)
{
  return Rat(a.num * b.num, a.den * b.den);
}
inline Rat operator/(const Rat& a, const Rat& b)
{
  if (b.num == 0) throw std::domain_error("Rat: division by zero");
  return Rat(a.num * b.den, a.den * b.num);
}
inline Rat operator-(const Rat& a) { return Rat(-a.num, a.den); }
inline Rat& operator+=(Rat& a, const Rat& b) { return a = a + b; }
inline Rat& operator-=(Rat& a, const Rat& b) { return a = a - b; }
inline Rat& operator*=(Rat& a, const Rat& b) { return a = a * b; }
inline Rat& operator/=(Rat& a, const Rat& b) { return a = a / b; }

inline bool operator==(const Rat& a, const Rat& b)
{
  return a.num == b.num && a.den == b.den;
}
inline bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
inline bool operator<(const Rat& a, const Rat& b)
{
  return a.num * b.den < b.num * a.den;
}
inline bool operator>(const Rat& a, const Rat& b) { return b < a; }
inline bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
inline bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

inline Rat rat_abs(const Rat& a) { return a.num < 0 ? -a : a; }

inline std::ostream& operator<<(std::ostream& os, const Rat& r)
{
  return os << r.str();
}

using RatVec = std::vector<Rat>;

inline RatVec operator+(const RatVec& a, const RatVec& b)
{
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}
inline RatVec operator-(const RatVec& a, const RatVec& b)
{
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}
inline RatVec operator*(const Rat& s, const RatVec& a)
{
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}
inline Rat dot(const RatVec& a, const RatVec& b)
{
  Rat r;
  for (size_t i = 0; i < a.size(); ++i) r += a[i] * b[i];
  return r;
}
inline bool is_zero_vec(const RatVec& a)
{
  for (const Rat& x : a)
    if (!x.is_zero()) return false;
  return true;
}
inline std::vector<double> to_double_vec(const RatVec& a)
{
  std::vector<double> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i].to_double();
  return r;
}

// Exact 2D point/vector in a planar frame.
struct Point2 {
  Rat x, y;
  bool operator==(const Point2& o) const { return x == o.x && y == o.y; }
  bool operator!=(const Point2& o) const { return !(*this == o); }
};

inline Point2 operator+(const Point2& a, const Point2& b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(const Rat& s, const Point2& a) { return {s * a.x, s * a.y}; }
inline Rat dot2(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline Rat cross2(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }

// Clear denominators and divide by gcd; keeps orientation. Used so direction
// deduplication and positive-scaling invariance are exact.
inline Point2 primitive_direction(const Point2& v)
{
  if (v.x.is_zero() && v.y.is_zero()) return v;
  Int m = int_lcm(v.x.den, v.y.den);
  Int a = v.x.num * (m / v.x.den);
  Int b = v.y.num * (m / v.y.den);
  Int g = int_gcd(a, b);
  return {Rat(a / g), Rat(b / g)};
}

}  // namespace crn
