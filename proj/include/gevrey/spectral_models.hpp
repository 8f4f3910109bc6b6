#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gevrey {

enum class ModelKind { Linear, Dirichlet1d, Bilaplacian1d, Geometric };

// Eigenvalue sequence mu_n (n >= 1) of the operator A.
struct SpectralModel {
  ModelKind kind{ModelKind::Geometric};
  double mu0{1.0};    // geometric only
  double ratio{2.0};  // geometric only, > 1

  static SpectralModel linear() { return {ModelKind::Linear, 1.0, 2.0}; }
  static SpectralModel dirichlet_1d() { return {ModelKind::Dirichlet1d, 1.0, 2.0}; }
  static SpectralModel bilaplacian_1d() { return {ModelKind::Bilaplacian1d, 1.0, 2.0}; }
  static SpectralModel geometric(double mu0, double ratio);

  double operator()(std::size_t n) const;
  std::string name() const;
};

std::optional<SpectralModel> model_from_string(const std::string& name);

std::vector<double> geometric_grid(double lo, double hi, std::size_t count);

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PowerLawFit {
  double exponent{0.0};
  double log_coefficient{0.0};  // natural log of C in v ~ C * x^exponent
  double r_squared{0.0};
  std::size_t window_begin{0};
  std::size_t window_end{0};  // one past the last index used
};

// Least squares of log v against log x over the last ceil(window * n) pairs.
PowerLawFit fit_exponent(const std::vector<double>& x, const std::vector<double>& v,
                         double window = 0.5, std::size_t min_points = 6);

struct InterpolationResult {
  bool holds{true};
  double slack{1.0};  // RHS / LHS
};

// ||A^p x|| <= ||A^q x||^((p-r)/(q-r)) ||A^r x||^((q-p)/(q-r)) for 0 <= r <= p <= q,
// with ||A^s x||^2 = sum_n mu_n^(2s) |x_n|^2 and n = 1..x.size().
InterpolationResult interpolation_check(double p, double q, double r,
                                        const std::vector<std::complex<double>>& x,
                                        const SpectralModel& model);

}  // namespace gevrey
