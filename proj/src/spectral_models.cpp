#include "gevrey/spectral_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gevrey {

SpectralModel SpectralModel::geometric(double mu0, double ratio) {
  if (!(mu0 > 0.0) || !(ratio > 1.0)) {
    throw std::invalid_argument("spectral model: geometric needs mu0 > 0 and ratio > 1");
  }
  return {ModelKind::Geometric, mu0, ratio};
}

double SpectralModel::operator()(std::size_t n) const {
  if (n == 0) throw std::invalid_argument("spectral model: modes are numbered from 1");
  const double x = static_cast<double>(n);
  const double pi = std::acos(-1.0);
  switch (kind) {
    case ModelKind::Linear:
      return x;
    case ModelKind::Dirichlet1d:
      return (x * pi) * (x * pi);
    case ModelKind::Bilaplacian1d: {
      const double s = (x * pi) * (x * pi);
      return s * s;
    }
    case ModelKind::Geometric:
      return mu0 * std::pow(ratio, x);
  }
  return x;
}

std::string SpectralModel::name() const {
  switch (kind) {
    case ModelKind::Linear: return "linear";
    case ModelKind::Dirichlet1d: return "dirichlet-1d";
    case ModelKind::Bilaplacian1d: return "bilaplacian-1d";
    case ModelKind::Geometric: return "geometric";
  }
  return "?";
}

std::optional<SpectralModel> model_from_string(const std::string& name) {
  if (name == "linear") return SpectralModel::linear();
  if (name == "dirichlet-1d") return SpectralModel::dirichlet_1d();
  if (name == "bilaplacian-1d") return SpectralModel::bilaplacian_1d();
  if (name == "geometric") return SpectralModel::geometric(1.0, std::pow(10.0, 0.05));
  return std::nullopt;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw std::invalid_argument("geometric_grid: need 0 < lo < hi and at least 2 points");
  }
  std::vector<double> g(count);
  const double l0 = std::log10(lo), l1 = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    g[i] = std::pow(10.0, l0 + (l1 - l0) * t);
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

PowerLawFit fit_exponent(const std::vector<double>& x, const std::vector<double>& v,
                         double window, std::size_t min_points) {
  if (x.size() != v.size()) throw std::invalid_argument("fit_exponent: size mismatch");
  if (!(window > 0.0 && window <= 1.0)) {
    throw std::invalid_argument("fit_exponent: window must lie in (0, 1]");
  }
  const std::size_t n = x.size();
  const auto want = static_cast<std::size_t>(std::ceil(window * static_cast<double>(n)));
  const std::size_t count = std::max(want, min_points);
  if (count > n || count < 2) {
    throw InsufficientData("fit_exponent: " + std::to_string(n) + " points, need " +
                           std::to_string(count));
  }
  PowerLawFit f;
  f.window_begin = n - count;
  f.window_end = n;
  std::vector<double> lx(count), lv(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double xi = x[f.window_begin + i], vi = v[f.window_begin + i];
    if (!(xi > 0.0) || !(vi > 0.0) || !std::isfinite(xi) || !std::isfinite(vi)) {
      throw InsufficientData("fit_exponent: non-positive or non-finite value in window");
    }
    lx[i] = std::log(xi);
    lv[i] = std::log(vi);
  }
  double mx = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    mx += lx[i];
    mv += lv[i];
  }
  mx /= static_cast<double>(count);
  mv /= static_cast<double>(count);
  double sxx = 0.0, sxv = 0.0, svv = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double dx = lx[i] - mx, dv = lv[i] - mv;
    sxx += dx * dx;
    sxv += dx * dv;
    svv += dv * dv;
  }
  if (!(sxx > 0.0)) throw InsufficientData("fit_exponent: abscissae are all equal");
  f.exponent = sxv / sxx;
  f.log_coefficient = mv - f.exponent * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double e = lv[i] - (f.log_coefficient + f.exponent * lx[i]);
    ss_res += e * e;
  }
  const double scale = std::max(1.0, mv * mv) * static_cast<double>(count);
  if (svv <= 1e-24 * scale) {
    f.r_squared = 1.0;
  } else {
    f.r_squared = std::clamp(1.0 - ss_res / svv, 0.0, 1.0);
  }
  return f;
}

namespace {

// log ||A^s x|| via a log-sum-exp over the nonzero coefficients.
double log_norm(double s, const std::vector<double>& log_mu, const std::vector<double>& log_x) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < log_x.size(); ++i)
    m = std::max(m, 2.0 * s * log_mu[i] + 2.0 * log_x[i]);
  double acc = 0.0;
  for (std::size_t i = 0; i < log_x.size(); ++i)
    acc += std::exp(2.0 * s * log_mu[i] + 2.0 * log_x[i] - m);
  return 0.5 * (m + std::log(acc));
}

}  // namespace

InterpolationResult interpolation_check(double p, double q, double r,
                                        const std::vector<std::complex<double>>& x,
                                        const SpectralModel& model) {
  if (!(0.0 <= r && r <= p && p <= q)) {
    throw std::invalid_argument("interpolation_check: need 0 <= r <= p <= q");
  }
  std::vector<double> log_mu, log_x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double m = std::abs(x[i]);
    if (m == 0.0) continue;
    log_mu.push_back(std::log(model(i + 1)));
    log_x.push_back(std::log(m));
  }
  if (log_x.empty()) throw std::invalid_argument("interpolation_check: x must be nonzero");
  InterpolationResult res;
  if (q == r) {
    res.slack = 1.0;
    return res;
  }
  const double theta = (p - r) / (q - r);
  const double lp = log_norm(p, log_mu, log_x);
  const double lq = log_norm(q, log_mu, log_x);
  const double lr = log_norm(r, log_mu, log_x);
  res.slack = std::exp(theta * lq + (1.0 - theta) * lr - lp);
  res.holds = res.slack >= 1.0 - 1e-12;
  return res;
}

}  // namespace gevrey
