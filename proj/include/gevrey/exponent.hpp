#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace gevrey {

struct Params;

class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);  // NOLINT(google-explicit-constructor)

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const { return num_ == 0; }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a) { return {-a.num_, a.den_}; }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rational& a, const Rational& b);

  std::string str() const;

 private:
  std::int64_t num_{0};
  std::int64_t den_{1};
};

// c0 + ca*alpha + cb*beta + cg*gamma with exact rational coefficients.
class AffineExponent {
 public:
  AffineExponent() = default;
  AffineExponent(Rational c0, Rational ca, Rational cb, Rational cg) : c_{c0, ca, cb, cg} {}

  static AffineExponent constant(Rational c) { return {c, 0, 0, 0}; }
  static AffineExponent alpha() { return {0, 1, 0, 0}; }
  static AffineExponent beta() { return {0, 0, 1, 0}; }
  static AffineExponent gamma() { return {0, 0, 0, 1}; }

  const Rational& coeff(int i) const { return c_[static_cast<std::size_t>(i)]; }

  double value(double alpha, double beta, double gamma) const;
  double value(const Params& p) const;

  // Restriction to a fixed gamma: returns (constant, alpha coefficient, beta coefficient).
  std::array<double, 3> on_slice(double gamma) const;

  friend AffineExponent operator+(const AffineExponent& a, const AffineExponent& b);
  friend AffineExponent operator-(const AffineExponent& a, const AffineExponent& b);
  friend AffineExponent operator*(const Rational& s, const AffineExponent& a);
  friend bool operator==(const AffineExponent& a, const AffineExponent& b) {
    return a.c_ == b.c_;
  }
  friend bool operator<(const AffineExponent& a, const AffineExponent& b);

  // Human-readable form such as "1+g" or "2a-b".
  std::string str() const;

 private:
  std::array<Rational, 4> c_{};
};

}  // namespace gevrey
