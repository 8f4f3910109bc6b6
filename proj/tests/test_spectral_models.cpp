#include <cmath>
#include <random>

#include "doctest.h"

#include "gevrey/spectral_models.hpp"

using namespace gevrey;

namespace {

// ||A^s x|| computed directly in long double.
long double power_norm(double s, const std::vector<std::complex<double>>& x, const SpectralModel& m) {
  long double acc = 0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const long double w = std::pow(static_cast<long double>(m(n + 1)), 2.0L * s);
    acc += w * std::norm(std::complex<long double>(x[n]));
  }
  return std::sqrt(acc);
}

}  // namespace

TEST_CASE("models: eigenvalue sequences") {
  const double pi = std::acos(-1.0);
  CHECK(SpectralModel::linear()(3) == 3.0);
  CHECK(SpectralModel::dirichlet_1d()(2) == doctest::Approx(4 * pi * pi));
  CHECK(SpectralModel::bilaplacian_1d()(1) == doctest::Approx(std::pow(pi, 4)));
  const auto g = SpectralModel::geometric(2.0, 10.0);
  CHECK(g(1) == doctest::Approx(20.0));
  CHECK(g(3) == doctest::Approx(2000.0));
  CHECK_THROWS_AS(SpectralModel::geometric(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SpectralModel::linear()(0), std::invalid_argument);
  for (const char* name : {"linear", "dirichlet-1d", "bilaplacian-1d", "geometric"}) {
    const auto m = model_from_string(name);
    REQUIRE(m.has_value());
    CHECK(m->name() == name);
    for (std::size_t n = 1; n < 200; ++n) CHECK((*m)(n + 1) > (*m)(n));
    CHECK((*m)(1) > 0.0);
  }
  CHECK_FALSE(model_from_string("neumann").has_value());
}

TEST_CASE("grid: geometric endpoints and spacing") {
  const auto g = geometric_grid(1e2, 1e10, 161);
  REQUIRE(g.size() == 161);
  CHECK(g.front() == doctest::Approx(1e2));
  CHECK(g.back() == doctest::Approx(1e10));
  CHECK(g[1] / g[0] == doctest::Approx(std::pow(10.0, 0.05)));
}

TEST_CASE("fit: exact power laws") {
  std::vector<double> x, v, w;
  for (int i = 1; i <= 8; ++i) x.push_back(std::pow(10.0, i));
  for (double t : x) v.push_back(t);
  auto f = fit_exponent(x, v, 1.0);
  CHECK(f.exponent == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));
  for (double t : x) w.push_back(3.0 * std::pow(t, -0.5));
  f = fit_exponent(x, w, 1.0);
  CHECK(std::abs(f.exponent + 0.5) < 1e-10);
  CHECK(f.log_coefficient == doctest::Approx(std::log(3.0)));
}

TEST_CASE("fit: tail window removes the transient") {
  const auto x = geometric_grid(1e2, 1e10, 161);
  std::vector<double> v;
  for (double t : x) v.push_back(std::sqrt(t) * (1 + 1 / t));
  const auto f = fit_exponent(x, v);
  CHECK(std::abs(f.exponent - 0.5) < 1e-3);
  CHECK(f.window_end == 161);
  CHECK(f.window_end - f.window_begin == 81);
}

TEST_CASE("fit: scaling the data shifts only the coefficient") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto x = geometric_grid(1.0, 1e6, 30);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> v, cv;
    const double c = std::exp(10 * (u(rng) - 0.5));
    for (double t : x) v.push_back(std::pow(t, u(rng) - 0.5) * (1 + 0.1 * u(rng)));
    for (double y : v) cv.push_back(c * y);
    const auto a = fit_exponent(x, v), b = fit_exponent(x, cv);
    CHECK(std::abs(a.exponent - b.exponent) < 1e-12);
    CHECK(std::abs(b.log_coefficient - a.log_coefficient - std::log(c)) < 1e-12);
  }
}

TEST_CASE("fit: bad input") {
  const std::vector<double> x{1, 2, 3}, v{1, 2, 3};
  CHECK_THROWS_AS(fit_exponent(x, v), InsufficientData);
  const auto g = geometric_grid(1, 100, 20);
  std::vector<double> z(20, 1.0);
  z.back() = 0.0;
  CHECK_THROWS_AS(fit_exponent(g, z), InsufficientData);
  CHECK_THROWS_AS(fit_exponent(g, std::vector<double>(19, 1.0)), std::invalid_argument);
}

TEST_CASE("interpolation: equality cases") {
  const auto m = SpectralModel::dirichlet_1d();
  const std::vector<std::complex<double>> x{{0.3, -0.2}, {1.1, 0.0}, {0.0, 0.7}};
  auto r = interpolation_check(0.5, 0.5, 0.5, x, m);
  CHECK(r.holds);
  CHECK(r.slack == doctest::Approx(1.0).epsilon(1e-14));
  const std::vector<std::complex<double>> single{{0, 0}, {0, 0}, {2.0, 1.0}};
  r = interpolation_check(1.0, 2.0, 0.0, single, m);
  CHECK(r.slack == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(interpolation_check(2.0, 1.0, 0.0, x, m), std::invalid_argument);
}

TEST_CASE("interpolation: random vectors against a direct evaluation") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> nrm;
  const auto m = SpectralModel::dirichlet_1d();
  for (int i = 0; i < 10000; ++i) {
    std::vector<std::complex<double>> x(50);
    x[rng() % 50] = {nrm(rng), nrm(rng)};
    x[rng() % 50] += std::complex<double>(nrm(rng), nrm(rng));
    const auto r = interpolation_check(1.0, 2.0, 0.0, x, m);
    CHECK(r.slack >= 1.0 - 1e-12);
    const long double lhs = power_norm(1.0, x, m);
    const long double rhs = std::sqrt(power_norm(2.0, x, m) * power_norm(0.0, x, m));
    CHECK(r.slack == doctest::Approx(static_cast<double>(rhs / lhs)).epsilon(1e-9));
  }
}
