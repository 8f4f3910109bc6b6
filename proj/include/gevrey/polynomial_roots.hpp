#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "gevrey/double_double.hpp"

namespace gevrey {

class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

struct RootOptions {
  int max_iterations{500};
  int polish_iterations{12};
  double residual_tolerance{1e-12};
};

struct PolynomialRoots {
  std::vector<std::complex<double>> roots;
  std::vector<cdd> precise;  // same roots before rounding to double
  double max_residual{0.0};  // max over roots of |p(z)| / sum |c_i||z|^i
  int iterations{0};
};

// Roots of sum_i coeffs[i] z^i (coeffs[0] is the constant term). The leading
// coefficient must be nonzero. Simultaneous Aberth-Ehrlich iteration started
// from Newton-polygon radii, then Newton polishing in double-double.
PolynomialRoots solve_polynomial(const std::vector<std::complex<double>>& coeffs,
                                 const RootOptions& opt = {});

// |p(z)| / sum |c_i||z|^i evaluated in double-double.
double relative_residual(const std::vector<std::complex<double>>& coeffs, const cdd& z);

}  // namespace gevrey
