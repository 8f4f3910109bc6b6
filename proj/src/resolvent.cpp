#include "gevrey/resolvent.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <thread>

#include "gevrey/modal_spectrum.hpp"

namespace gevrey {

namespace {

using cplx = std::complex<double>;
using Mat4c = Eigen::Matrix<cplx, 4, 4>;

double sigma_max(const Mat4c& m) {
  Eigen::JacobiSVD<Mat4c> svd(m);
  return svd.singularValues()(0);
}

// Samples f on the geometric model, then refines the largest local maxima.
constexpr std::size_t kRefinedPeaks = 6;
constexpr int kGoldenIterations = 90;

double golden_max(const Params& p, double lambda, double lo, double hi, double& best_mu) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = std::log(lo), b = std::log(hi);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = modal_resolvent_norm_structured(p, std::exp(x1), lambda);
  double f2 = modal_resolvent_norm_structured(p, std::exp(x2), lambda);
  for (int it = 0; it < kGoldenIterations && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = modal_resolvent_norm_structured(p, std::exp(x1), lambda);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = modal_resolvent_norm_structured(p, std::exp(x2), lambda);
    }
  }
  if (f1 >= f2) {
    best_mu = std::exp(x1);
    return f1;
  }
  best_mu = std::exp(x2);
  return f2;
}

}  // namespace

WeightedMode weighted_mode(const Params& p, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("weighted_mode: mu must be > 0");
  WeightedMode w;
  w.mu = mu;
  w.weight = {std::sqrt(p.a) * std::pow(mu, 0.5 * p.gamma), 1.0, std::sqrt(mu), 1.0};
  return w;
}

double modal_resolvent_norm(const Params& p, double mu, double lambda, double weight_scale) {
  if (!(weight_scale > 0.0)) throw std::invalid_argument("modal_resolvent_norm: scale must be > 0");
  const ModalMatrix M = modal_matrix(p, mu);
  const WeightedMode w = weighted_mode(p, mu);
  Mat4c N;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double wi = weight_scale * w.weight[static_cast<std::size_t>(i)];
      const double wj = weight_scale * w.weight[static_cast<std::size_t>(j)];
      N(i, j) = -M.entries(i, j) * wi / wj;
    }
  for (int i = 0; i < 4; ++i) N(i, i) += cplx(0.0, lambda);
  Eigen::JacobiSVD<Mat4c> svd(N);
  const double smin = svd.singularValues()(3);
  if (smin < 1e-30) {
    std::ostringstream os;
    os << "modal_resolvent_norm: i*lambda is numerically an eigenvalue (sigma_min=" << smin
       << ", mu=" << mu << ", lambda=" << lambda << ")";
    throw SingularMode(os.str());
  }
  return 1.0 / smin;
}

double modal_resolvent_norm_structured(const Params& p, double mu, double lambda) {
  if (!(mu > 0.0)) throw std::invalid_argument("modal_resolvent_norm: mu must be > 0");
  // Weighted block: [[0,c1,0,0],[-c1,0,0,c2],[0,0,0,c3],[0,-c2,-c3,-d]].
  const double c1 = std::sqrt(p.a) * std::pow(mu, 0.5 * p.gamma);
  const double c2 = p.b * std::pow(mu, p.alpha);
  const double c3 = std::sqrt(mu);
  const double d = p.k * std::pow(mu, p.beta);
  const double l = lambda;
  const cplx z(0.0, l);

  const double e1 = (c1 - l) * (c1 + l);
  const double h23 = std::hypot(c2, c3);
  const double e23 = (h23 - l) * (h23 + l);
  const double e3 = (c3 - l) * (c3 + l);
  const double h12 = std::hypot(c1, c2);
  const double e12 = (h12 - l) * (h12 + l);
  const cplx q3(e3, d * l);
  const cplx q23(e23, d * l);

  // Undamped frequencies s1 >= s2 of the skew part, without forming c2^4.
  const double S = c1 * c1 + c2 * c2 + c3 * c3;
  const double A = (c1 - c3) * (c1 + c3);
  const double tail = std::hypot(std::hypot(std::sqrt(2.0) * c1, std::sqrt(2.0) * c3), c2);
  const double root_disc = std::hypot(A, c2 * tail);
  const double r1 = 0.5 * (S + root_disc);
  const double r2 = (c1 * c3) * (c1 * c3) / r1;
  const double s1 = std::sqrt(r1), s2 = std::sqrt(r2);
  const cplx det = cplx((l - s1) * (l + s1) * ((l - s2) * (l + s2)), 0.0) + cplx(0.0, d * l * e1);
  if (det == cplx(0.0) || !std::isfinite(std::abs(det))) {
    std::ostringstream os;
    os << "modal_resolvent_norm: singular or overflowing determinant at mu=" << mu
       << ", lambda=" << lambda;
    throw SingularMode(os.str());
  }

  Mat4c adj;
  adj << z * q23, c1 * q3, -c1 * c2 * c3, c1 * c2 * z,
      -c1 * q3, z * q3, -c2 * c3 * z, c2 * z * z,
      c1 * c2 * c3, -c2 * c3 * z, cplx(d * e1, l * e12), c3 * e1,
      c1 * c2 * z, -c2 * z * z, -c3 * e1, z * e1;
  // Scale before the SVD so that no entry overflows.
  const double scale = adj.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale)) throw SingularMode("modal_resolvent_norm: bad adjugate");
  const Mat4c inv = adj / scale;
  return sigma_max(inv) * (scale / std::abs(det));
}

ResolventValue resolvent_norm(const Params& p, double lambda, const SpectralModel& model,
                              std::size_t n_max) {
  if (n_max < 1) throw std::invalid_argument("resolvent_norm: n_max must be >= 1");
  std::vector<double> mu(n_max), f(n_max);
  for (std::size_t n = 0; n < n_max; ++n) {
    mu[n] = model(n + 1);
    f[n] = modal_resolvent_norm_structured(p, mu[n], lambda);
  }
  ResolventValue r;
  std::size_t arg = 0;
  for (std::size_t n = 1; n < n_max; ++n)
    if (f[n] > f[arg]) arg = n;
  r.discrete = f[arg];
  r.argmax = arg + 1;
  r.truncated = arg + 1 == n_max;
  r.refined = r.discrete;
  r.refined_mu = mu[arg];
  if (n_max < 2) return r;

  std::vector<std::size_t> peaks;
  for (std::size_t n = 0; n < n_max; ++n) {
    const bool left = n == 0 || f[n] >= f[n - 1];
    const bool right = n + 1 == n_max || f[n] >= f[n + 1];
    if (left && right) peaks.push_back(n);
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](std::size_t x, std::size_t y) { return f[x] > f[y]; });
  if (peaks.size() > kRefinedPeaks) peaks.resize(kRefinedPeaks);
  for (std::size_t n : peaks) {
    const double lo = mu[n == 0 ? 0 : n - 1];
    const double hi = mu[n + 1 == n_max ? n : n + 1];
    if (!(hi > lo)) continue;
    double m = 0.0;
    const double v = golden_max(p, lambda, lo, hi, m);
    if (v > r.refined) {
      r.refined = v;
      r.refined_mu = m;
    }
  }
  return r;
}

std::vector<double> default_lambda_grid() { return geometric_grid(1e3, 1e9, 25); }

ResolventCurve resolvent_sweep(const Params& p, const std::vector<double>& lambda_grid,
                               const ResolventOptions& opt) {
  if (lambda_grid.size() < 6) throw std::invalid_argument("resolvent_sweep: need >= 6 lambdas");
  const std::size_t n = lambda_grid.size();
  ResolventCurve c;
  c.lambda_grid = lambda_grid;
  c.values.assign(n, 0.0);
  c.argmax_mu.assign(n, 0.0);
  std::vector<char> trunc(n, 0);
  std::vector<std::string> errors(n);
  c.mode_count_used = opt.n_max;

  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < n; i += stride) {
      try {
        const ResolventValue v = resolvent_norm(p, lambda_grid[i], opt.model, opt.n_max);
        c.values[i] = v.refined;
        c.argmax_mu[i] = v.refined_mu;
        trunc[i] = v.truncated ? 1 : 0;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const std::size_t nthreads = static_cast<std::size_t>(std::max(1, opt.jobs));
  if (nthreads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(work, t, nthreads);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  c.truncated.assign(trunc.begin(), trunc.end());
  c.fit = fit_exponent(lambda_grid, c.values, opt.fit_window);
  return c;
}

CriterionReport criterion_check(double expected_mu, const ResolventCurve& curve) {
  CriterionReport r;
  r.m = curve.m();
  r.expected_mu = expected_mu;
  r.r_squared = curve.fit.r_squared;
  std::size_t t = 0;
  for (bool b : curve.truncated) t += b ? 1 : 0;
  r.truncated_fraction =
      curve.truncated.empty() ? 0.0 : static_cast<double>(t) / static_cast<double>(curve.truncated.size());
  std::ostringstream os;
  if (r.r_squared < 0.999 || r.truncated_fraction > 0.2) {
    r.status = CheckStatus::Inconclusive;
    os << "inconclusive fit: R2=" << r.r_squared << ", truncated fraction=" << r.truncated_fraction;
  } else if (expected_mu >= 1.0) {
    r.status = r.m >= 0.95 ? CheckStatus::Pass : CheckStatus::Fail;
    os << "m=" << r.m << " (analytic needs m >= 0.95)";
  } else {
    r.status = std::abs(r.m - expected_mu) <= 0.05 * expected_mu ? CheckStatus::Pass : CheckStatus::Fail;
    os << "m=" << r.m << " vs mu=" << expected_mu;
  }
  r.message = os.str();
  return r;
}

CriterionReport criterion_check(const Params& p, const ResolventCurve& curve) {
  const RegularityVerdict v = classify_regularity(p);
  if (v.kind == Regularity::NotDifferentiable)
    throw std::invalid_argument("criterion_check: point lies outside the regularity domain");
  return criterion_check(v.mu, curve);
}

DifferentiabilityReport differentiability_check(const ResolventCurve& curve) {
  std::vector<double> g(curve.values.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::log(curve.lambda_grid[i]) * curve.values[i];
  DifferentiabilityReport r;
  const PowerLawFit f = fit_exponent(curve.lambda_grid, g, 0.5);
  r.growth_exponent = f.exponent;
  r.first = g[f.window_begin];
  r.last = g.back();
  // log(lambda) * norm must tend to 0; a tail that does not decay violates it.
  r.criterion_holds = f.exponent < -0.05;
  return r;
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Inconclusive: return "WARN";
  }
  return "?";
}

}  // namespace gevrey
