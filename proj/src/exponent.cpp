#include "gevrey/exponent.hpp"

#include <numeric>
#include <stdexcept>

#include "gevrey/params.hpp"

namespace gevrey {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational: overflow");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("rational: overflow");
  return r;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n, d);
  num_ = g ? n / g : 0;
  den_ = g ? d / g : 1;
}

Rational operator+(const Rational& a, const Rational& b) {
  return {checked_add(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)),
          checked_mul(a.den_, b.den_)};
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return {checked_mul(a.num_, b.num_), checked_mul(a.den_, b.den_)};
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational: division by zero");
  return {checked_mul(a.num_, b.den_), checked_mul(a.den_, b.num_)};
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

double AffineExponent::value(double alpha, double beta, double gamma) const {
  return c_[0].value() + c_[1].value() * alpha + c_[2].value() * beta + c_[3].value() * gamma;
}

double AffineExponent::value(const Params& p) const { return value(p.alpha, p.beta, p.gamma); }

std::array<double, 3> AffineExponent::on_slice(double gamma) const {
  return {c_[0].value() + c_[3].value() * gamma, c_[1].value(), c_[2].value()};
}

AffineExponent operator+(const AffineExponent& a, const AffineExponent& b) {
  AffineExponent r;
  for (std::size_t i = 0; i < 4; ++i) r.c_[i] = a.c_[i] + b.c_[i];
  return r;
}

AffineExponent operator-(const AffineExponent& a, const AffineExponent& b) {
  AffineExponent r;
  for (std::size_t i = 0; i < 4; ++i) r.c_[i] = a.c_[i] - b.c_[i];
  return r;
}

AffineExponent operator*(const Rational& s, const AffineExponent& a) {
  AffineExponent r;
  for (std::size_t i = 0; i < 4; ++i) r.c_[i] = s * a.c_[i];
  return r;
}

bool operator<(const AffineExponent& a, const AffineExponent& b) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (a.c_[i] < b.c_[i]) return true;
    if (b.c_[i] < a.c_[i]) return false;
  }
  return false;
}

std::string AffineExponent::str() const {
  static const char* sym[4] = {"", "a", "b", "g"};
  std::string out;
  for (std::size_t i = 0; i < 4; ++i) {
    const Rational& c = c_[i];
    if (c.is_zero()) continue;
    const bool neg = c < Rational(0);
    const Rational mag = neg ? -c : c;
    if (!out.empty() || neg) out += neg ? "-" : "+";
    if (i == 0) {
      out += mag.str();
    } else {
      if (!(mag == Rational(1))) out += (mag.den() == 1 ? mag.str() : "(" + mag.str() + ")");
      out += sym[i];
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace gevrey
