#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gevrey/exponent.hpp"
#include "gevrey/params.hpp"

namespace gevrey {

// One contribution coeff * mu^power to a polynomial coefficient.
struct Monomial {
  std::complex<double> coeff;
  AffineExponent power;
  double value{0.0};  // power evaluated at the params (filled by exponent_points)
};

struct ExponentPoint {
  int degree{0};
  double exponent{0.0};
  std::vector<Monomial> contributions;  // sub-ledger; may be empty for numeric use
};

struct HullSegment {
  double p{0.0};  // the segment has slope -p; its roots scale like mu^p
  int deg_lo{0};
  int deg_hi{0};
  std::vector<int> participating;  // degrees lying on the segment
  int span() const { return deg_hi - deg_lo; }
};

// Upper convex hull of {(degree, exponent)}, ordered by increasing degree
// (increasing p). Points within tol of a segment count as participating.
std::vector<HullSegment> newton_polygon(const std::vector<ExponentPoint>& points,
                                        double tol = 1e-12);

// Polynomial in lambda whose coefficients are sums of coeff * mu^power.
struct GenPoly {
  std::vector<std::vector<Monomial>> coeff;  // index = degree in lambda
  bool real_coefficients{true};
};

GenPoly characteristic_genpoly(const Params& p);

// Exponent points of the nonzero coefficients at p; exponent = max power.
std::vector<ExponentPoint> exponent_points(const GenPoly& poly, const Params& p);

struct Balance {
  std::complex<double> z;
  int multiplicity{1};
};

class DegenerateBalance : public std::runtime_error {
 public:
  DegenerateBalance(const std::string& what, std::vector<Balance> balances)
      : std::runtime_error(what), balances_(std::move(balances)) {}
  const std::vector<Balance>& balances() const { return balances_; }

 private:
  std::vector<Balance> balances_;
};

// Roots (z != 0) of the reduced polynomial of one hull segment: the sum over
// participating degrees of the co-dominant monomial coefficients times z^degree.
// Repeated roots are merged with their multiplicity; with throw_on_degenerate
// a repeated root raises DegenerateBalance instead.
std::vector<Balance> leading_balance(const HullSegment& segment,
                                     const std::vector<ExponentPoint>& points,
                                     bool throw_on_degenerate = false);

// Coefficients (index = degree) of the reduced polynomial of a segment.
std::vector<std::complex<double>> reduced_polynomial(const HullSegment& segment,
                                                     const std::vector<ExponentPoint>& points);

struct Term {
  std::complex<double> coeff;
  AffineExponent power;
  double value{0.0};  // power evaluated at the params
};

struct AsymptoticBranch {
  std::vector<Term> terms;  // strictly decreasing powers
  double leading_power{0.0};
  std::optional<double> real_part_power;
  std::optional<AffineExponent> real_part_form;
  std::optional<double> imag_part_power;
  std::optional<AffineExponent> imag_part_form;
  int segment{0};           // index of the top-level hull segment
  bool degenerate{false};   // passed through a repeated leading balance
  bool real_valued{false};  // every term real and the branch is simple
  bool exact{false};        // the remainder vanished identically
  bool complete{false};     // real part resolved within the depth budget

  std::complex<double> evaluate(double mu) const;
  // Same, keeping only the first n terms.
  std::complex<double> evaluate(double mu, std::size_t n) const;
};

class DepthExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExpansionOptions {
  int depth{4};
  int min_terms{2};
  double cancel_tolerance{1e-9};
  double exponent_tolerance{1e-12};
};

// Expansions of all four characteristic roots as mu -> infinity.
std::vector<AsymptoticBranch> expand_roots(const Params& p, const ExpansionOptions& opt = {});

// expand_roots, deepening (doubling opt.depth up to max_depth) until every
// oscillating branch has a resolved real part.
std::vector<AsymptoticBranch> expand_roots_resolved(const Params& p,
                                                    const ExpansionOptions& opt = {},
                                                    int max_depth = 256);

// Adds further terms to a simple branch until its real part is resolved or
// depth levels are used. Incomplete branches come back with complete=false.
// Throws DegenerateBalance if the correction equation has a repeated root.
AsymptoticBranch refine_branch(const AsymptoticBranch& branch, const Params& p, int depth,
                               const ExpansionOptions& opt = {});

// min over oscillating branches of real_part_power / imag_part_power, capped at 1.
// Returns 0 when some oscillating branch has real_part_power <= 0.
struct RatioLaw {
  double ratio{1.0};
  int worst_branch{-1};
  bool not_differentiable{false};
  bool complete{true};
};
RatioLaw ratio_law(const std::vector<AsymptoticBranch>& branches);

// Multiset of (leading, real-part, imaginary-part) exponent forms restricted
// to the gamma slice, rendered as sorted strings.
using Signature = std::vector<std::string>;
Signature branch_signature(const std::vector<AsymptoticBranch>& branches, double gamma);

class SignatureMismatch : public std::runtime_error {
 public:
  SignatureMismatch(const std::string& what, Params first, Params second)
      : std::runtime_error(what), first_(first), second_(second) {}
  const Params& first() const { return first_; }
  const Params& second() const { return second_; }

 private:
  Params first_;
  Params second_;
};

struct CellScanReport {
  Cell cell{Cell::V1};
  double gamma{1.0};
  double a{2.0};
  int samples{0};
  Signature signature;
  std::vector<Params> points;
};

// Samples interior points of the cell at the gamma slice (same-speed cells use
// a = gamma = 1, others a = 2) and checks the signature is constant.
CellScanReport cell_uniformity_scan(Cell cell, int samples, double gamma, std::uint64_t seed,
                                    int jobs = 1);

// Signature at one point (used for L and P cells).
Signature point_signature(const Params& p, const ExpansionOptions& opt = {});

}  // namespace gevrey
