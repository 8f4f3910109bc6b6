#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "gevrey/exponent.hpp"
#include "gevrey/params.hpp"
#include "gevrey/polynomial_roots.hpp"
#include "gevrey/spectral_models.hpp"

namespace gevrey {

struct LedgerEntry {
  int degree{0};
  double coefficient{1.0};  // prefactor built from a, b, k
  AffineExponent power;
  double exponent{0.0};     // power evaluated at the params
};

// lambda^4 + c3 lambda^3 + c2 lambda^2 + c1 lambda + c0 (c[4] = 1).
struct ModalQuartic {
  double mu{1.0};
  std::array<double, 5> c{};
  std::vector<LedgerEntry> ledger;

  std::vector<std::complex<double>> coefficients() const;
};

class Overflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ModalQuartic build_quartic(const Params& p, double mu);

// Quartic in z with lambda = scale * z (monic again after dividing by scale^4).
ModalQuartic rescale(const ModalQuartic& q, double scale);

struct ModalMatrix {
  double mu{1.0};
  Eigen::Matrix4d entries;
};

ModalMatrix modal_matrix(const Params& p, double mu);

PolynomialRoots solve_quartic(const ModalQuartic& q, const RootOptions& opt = {});

struct BranchFit {
  PowerLawFit re;
  PowerLawFit im;
  bool re_valid{false};
  bool im_valid{false};    // imaginary part nonzero over the whole window
  bool oscillating{false};  // im_valid and the imaginary part grows (s > 0)
};

enum class SweepWarningKind { BranchSwap, Degenerate };

struct SweepWarning {
  SweepWarningKind kind;
  std::size_t index;
  std::string message;
};

struct SpectrumSweep {
  Params params;
  std::vector<double> mu_grid;
  std::array<std::vector<std::complex<double>>, 4> branches;
  std::array<BranchFit, 4> fits;
  std::vector<SweepWarning> warnings;
  double max_residual{0.0};
};

// Growth threshold for counting a branch as oscillating.
inline constexpr double kOscillationThreshold = 0.05;

SpectrumSweep spectrum_sweep(const Params& p, const std::vector<double>& grid, int jobs = 1);

class PoorFit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GevreyEstimate {
  double mu_hat{1.0};
  bool not_differentiable{false};
  int worst_branch{-1};
};

GevreyEstimate gevrey_exponent_estimate(const SpectrumSweep& s, double min_r_squared = 0.999);

std::string to_string(SweepWarningKind k);

}  // namespace gevrey
