#pragma once

#include <cmath>
#include <complex>

namespace gevrey {

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2 (about 32 significant digits).
struct dd {
  double hi{0.0};
  double lo{0.0};

  constexpr dd() = default;
  constexpr dd(double h) : hi(h), lo(0.0) {}  // NOLINT(google-explicit-constructor)
  constexpr dd(double h, double l) : hi(h), lo(l) {}

  double to_double() const { return hi + lo; }
};

namespace ddops {

inline dd two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

inline dd quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace ddops

inline dd operator+(const dd& a, const dd& b) {
  dd s = ddops::two_sum(a.hi, b.hi);
  dd t = ddops::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = ddops::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return ddops::quick_two_sum(s.hi, s.lo);
}

inline dd operator-(const dd& a) { return {-a.hi, -a.lo}; }
inline dd operator-(const dd& a, const dd& b) { return a + (-b); }

inline dd operator*(const dd& a, const dd& b) {
  dd p = ddops::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return ddops::quick_two_sum(p.hi, p.lo);
}

inline dd operator/(const dd& a, const dd& b) {
  const double q1 = a.hi / b.hi;
  dd r = a - b * dd(q1);
  const double q2 = r.hi / b.hi;
  r = r - b * dd(q2);
  const double q3 = r.hi / b.hi;
  return dd(q1) + dd(q2) + dd(q3);
}

inline dd& operator+=(dd& a, const dd& b) { return a = a + b; }
inline dd& operator-=(dd& a, const dd& b) { return a = a - b; }
inline dd& operator*=(dd& a, const dd& b) { return a = a * b; }
inline dd& operator/=(dd& a, const dd& b) { return a = a / b; }

inline bool operator<(const dd& a, const dd& b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const dd& a, const dd& b) { return b < a; }
inline bool operator==(const dd& a, const dd& b) { return a.hi == b.hi && a.lo == b.lo; }

inline dd abs(const dd& a) { return a.hi < 0.0 ? -a : a; }

inline dd sqrt(const dd& a) {
  if (a.hi <= 0.0) return dd(0.0);
  const double x = 1.0 / std::sqrt(a.hi);
  const double ax = a.hi * x;
  const dd diff = a - ddops::two_prod(ax, ax);
  return ddops::two_sum(ax, diff.hi * (x * 0.5));
}

// Complex number with double-double components.
struct cdd {
  dd re;
  dd im;

  cdd() = default;
  cdd(dd r, dd i = dd(0.0)) : re(r), im(i) {}  // NOLINT(google-explicit-constructor)
  explicit cdd(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
};

inline cdd operator+(const cdd& a, const cdd& b) { return {a.re + b.re, a.im + b.im}; }
inline cdd operator-(const cdd& a, const cdd& b) { return {a.re - b.re, a.im - b.im}; }
inline cdd operator-(const cdd& a) { return {-a.re, -a.im}; }
inline cdd operator*(const cdd& a, const cdd& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline cdd operator*(const cdd& a, const dd& s) { return {a.re * s, a.im * s}; }
inline cdd operator/(const cdd& a, const cdd& b) {
  // Scale by the larger component of b to keep the denominator in range.
  const double sc = std::max(std::abs(b.re.hi), std::abs(b.im.hi));
  const dd inv(1.0 / sc);
  const cdd bs{b.re * inv, b.im * inv};
  const dd den = bs.re * bs.re + bs.im * bs.im;
  const cdd num = a * cdd{bs.re, -bs.im};
  return {num.re / den * inv, num.im / den * inv};
}

inline double abs_approx(const cdd& z) { return std::hypot(z.re.to_double(), z.im.to_double()); }

}  // namespace gevrey
