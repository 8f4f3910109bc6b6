#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "gevrey/params.hpp"
#include "gevrey/spectral_models.hpp"

namespace gevrey {

// Diagonal weight realizing the energy norm on one eigenmode.
struct WeightedMode {
  double mu{1.0};
  std::array<double, 4> weight{};
};

WeightedMode weighted_mode(const Params& p, double mu);

class SingularMode : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InconclusiveFit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 1 / sigma_min(i lambda I - W M W^-1) with a dense complex SVD.
// weight_scale multiplies W (the value must not depend on it).
double modal_resolvent_norm(const Params& p, double mu, double lambda, double weight_scale = 1.0);

// Same quantity from the closed-form inverse of the weighted 4x4 block. Stays
// accurate when the dense route loses digits (|lambda| and mu large).
double modal_resolvent_norm_structured(const Params& p, double mu, double lambda);

struct ResolventValue {
  double discrete{0.0};     // max over mu_1..mu_nmax
  std::size_t argmax{0};    // 1-based mode index of the discrete max
  double refined{0.0};      // max after golden-section refinement in log mu
  double refined_mu{0.0};
  bool truncated{false};    // the discrete argmax is the last mode
};

// Supremum over the first n_max modes of model, refined continuously in mu
// around the largest local maxima (the endpoints included).
ResolventValue resolvent_norm(const Params& p, double lambda, const SpectralModel& model,
                              std::size_t n_max);

struct ResolventOptions {
  SpectralModel model{SpectralModel::geometric(1.0, 1.1220184543019633)};
  std::size_t n_max{1200};  // geometric default: mu up to 1e60
  int jobs{1};
  double fit_window{0.5};
};

struct ResolventCurve {
  std::vector<double> lambda_grid;
  std::vector<double> values;  // refined suprema
  std::vector<double> argmax_mu;
  std::vector<bool> truncated;
  std::size_t mode_count_used{0};
  PowerLawFit fit;  // values ~ C lambda^exponent, so m = -exponent
  double m() const { return -fit.exponent; }
};

ResolventCurve resolvent_sweep(const Params& p, const std::vector<double>& lambda_grid,
                               const ResolventOptions& opt = {});

// Default grid: 25 geometric points over [1e3, 1e9].
std::vector<double> default_lambda_grid();

enum class CheckStatus { Pass, Fail, Inconclusive };

struct CriterionReport {
  CheckStatus status{CheckStatus::Inconclusive};
  double m{0.0};
  double expected_mu{0.0};
  double r_squared{0.0};
  double truncated_fraction{0.0};
  std::string message;
};

// Compares the fitted decay exponent with the classifier's mu.
CriterionReport criterion_check(const Params& p, const ResolventCurve& curve);
CriterionReport criterion_check(double expected_mu, const ResolventCurve& curve);

struct DifferentiabilityReport {
  bool criterion_holds{true};  // log(lambda) * norm -> 0 along the sweep
  double growth_exponent{0.0};  // fitted exponent of log(lambda) * norm
  double first{0.0};
  double last{0.0};
};

DifferentiabilityReport differentiability_check(const ResolventCurve& curve);

std::string to_string(CheckStatus s);

}  // namespace gevrey
