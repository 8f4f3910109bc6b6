#include <algorithm>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"

#include "gevrey/modal_spectrum.hpp"

using namespace gevrey;

namespace {

using cd = std::complex<double>;

// Largest distance after greedy nearest pairing, relative to |b|.
double pair_error(std::vector<cd> a, std::vector<cd> b) {
  double worst = 0.0;
  for (const cd& z : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](const cd& x, const cd& y) {
      return std::abs(x - z) < std::abs(y - z);
    });
    worst = std::max(worst, std::abs(*it - z) / std::max(std::abs(z), 1e-300));
    b.erase(it);
  }
  return worst;
}

using MatL = Eigen::Matrix<long double, 4, 4>;

// Parlett-Reinsch balancing by powers of two (exact similarity).
MatL balance(MatL a) {
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < 4; ++i) {
      long double c = 0, r = 0;
      for (int j = 0; j < 4; ++j)
        if (j != i) {
          c += std::abs(a(j, i));
          r += std::abs(a(i, j));
        }
      if (c == 0 || r == 0) continue;
      long double f = 1;
      const long double s = c + r;
      while (c < r / 2) {
        c *= 2;
        r /= 2;
        f *= 2;
      }
      while (c >= r * 2) {
        c /= 2;
        r *= 2;
        f /= 2;
      }
      if ((c + r) < 0.95L * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return a;
}

// Dense eigenvalues of the balanced matrix in extended precision.
std::vector<cd> eigenvalues(const ModalMatrix& m) {
  const MatL a = balance(m.entries.cast<long double>());
  Eigen::EigenSolver<MatL> es(a, false);
  std::vector<cd> ev;
  for (int i = 0; i < 4; ++i) {
    const auto z = es.eigenvalues()[i];
    ev.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  }
  return ev;
}

}  // namespace

TEST_CASE("quartic: coefficient examples") {
  auto q = build_quartic(Params::make(0.3, 0.7, 1.5, 2), 1.0);
  CHECK(q.c[3] == 1.0);
  CHECK(q.c[2] == 4.0);
  CHECK(q.c[1] == 2.0);
  CHECK(q.c[0] == 2.0);
  CHECK(q.c[4] == 1.0);

  q = build_quartic(Params::make(0, 0, 1, 2), 100.0);
  CHECK(q.c[3] == doctest::Approx(1.0));
  CHECK(q.c[2] == doctest::Approx(301.0));
  CHECK(q.c[1] == doctest::Approx(200.0));
  CHECK(q.c[0] == doctest::Approx(20000.0));

  q = build_quartic(Params::make(0.5, 1, 1, 1), 1e4);
  CHECK(q.c[3] == doctest::Approx(1e4));
  CHECK(q.c[2] == doctest::Approx(3e4));
  CHECK(q.c[1] == doctest::Approx(1e8));
  CHECK(q.c[0] == doctest::Approx(1e8));
}

TEST_CASE("quartic: general b and k enter the coefficients") {
  const double mu = 7.0;
  const Params p = Params::make(0.4, 0.6, 1.2, 2.5, 1.7, 0.3);
  const auto q = build_quartic(p, mu);
  CHECK(q.c[3] == doctest::Approx(0.3 * std::pow(mu, 0.6)));
  CHECK(q.c[2] == doctest::Approx(mu + 1.7 * 1.7 * std::pow(mu, 0.8) + 2.5 * std::pow(mu, 1.2)));
  CHECK(q.c[1] == doctest::Approx(2.5 * 0.3 * std::pow(mu, 1.8)));
  CHECK(q.c[0] == doctest::Approx(2.5 * std::pow(mu, 2.2)));
}

TEST_CASE("modal matrix: examples") {
  const auto m = modal_matrix(Params::make(0.2, 0.9, 0.7, 2), 1.0);
  Eigen::Matrix4d want;
  want << 0, 1, 0, 0, -2, 0, 0, 1, 0, 0, 0, 1, 0, -1, -1, -1;
  CHECK((m.entries - want).norm() == 0.0);
  const auto t = modal_matrix(Params::make(0.2, 0.5, 1, 2, 1, 2), 4.0);
  CHECK(t.entries.trace() == doctest::Approx(-4.0));
}

TEST_CASE("quartic: lambda^4 = 16") {
  ModalQuartic q;
  q.c = {-16, 0, 0, 0, 1};
  const auto r = solve_quartic(q).roots;
  CHECK(pair_error(r, {2.0, -2.0, cd(0, 2), cd(0, -2)}) < 1e-14);
}

TEST_CASE("quartic: mu = 1 roots match the matrix eigenvalues") {
  const Params p = Params::make(0.4, 0.3, 1.3, 2);
  const auto r = solve_quartic(build_quartic(p, 1.0)).roots;
  CHECK(pair_error(r, eigenvalues(modal_matrix(p, 1.0))) < 1e-10);
}

TEST_CASE("quartic: wave magnitudes for alpha = beta = 0") {
  const double mu = 1e8;
  const auto r = solve_quartic(build_quartic(Params::make(0, 0, 1, 2), mu)).roots;
  std::vector<double> mags;
  for (const auto& z : r) mags.push_back(std::abs(z));
  std::sort(mags.begin(), mags.end());
  CHECK(mags[0] == doctest::Approx(std::sqrt(mu)).epsilon(1e-3));
  CHECK(mags[1] == doctest::Approx(std::sqrt(mu)).epsilon(1e-3));
  CHECK(mags[2] == doctest::Approx(std::sqrt(2 * mu)).epsilon(1e-3));
  CHECK(mags[3] == doctest::Approx(std::sqrt(2 * mu)).epsilon(1e-3));
}

TEST_CASE("quartic: random oracle, conjugate symmetry and left half-plane") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const double g = 0.5 + 1.5 * u(rng);
    const Params p = Params::make(u(rng) * (g + 1) / 2, u(rng), g, 0.5 + 2 * u(rng),
                                  0.5 + u(rng), 0.5 + u(rng));
    const double mu = std::pow(10.0, 6 * u(rng));
    const auto r = solve_quartic(build_quartic(p, mu)).roots;
    CHECK(pair_error(r, eigenvalues(modal_matrix(p, mu))) < 1e-8);
    std::vector<cd> conj;
    for (const auto& z : r) conj.push_back(std::conj(z));
    CHECK(pair_error(r, conj) < 1e-12);
    for (const auto& z : r) CHECK(z.real() <= 1e-8 * std::max(1.0, std::abs(z)));
  }
}

TEST_CASE("quartic: rescaled solve maps back") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double g = 0.5 + 1.5 * u(rng);
    const Params p = Params::make(u(rng) * (g + 1) / 2, u(rng), g, 2);
    const double mu = std::pow(10.0, 6 * u(rng));
    const auto q = build_quartic(p, mu);
    const double scale = std::pow(mu, 0.25 + 0.5 * u(rng));
    auto z = solve_quartic(rescale(q, scale)).roots;
    for (auto& x : z) x *= scale;
    CHECK(pair_error(z, solve_quartic(q).roots) < 1e-10);
  }
}

TEST_CASE("sweep: R2 sample exponent and flags") {
  const auto grid = geometric_grid(1e2, 1e10, 161);
  const auto s = spectrum_sweep(Params::make(0.75, 1, 2, 2), grid, 2);
  CHECK(s.mu_grid.size() == 161);
  for (const auto& br : s.branches) CHECK(br.size() == 161);
  const auto est = gevrey_exponent_estimate(s);
  CHECK_FALSE(est.not_differentiable);
  CHECK(est.mu_hat == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("sweep: R1 sample is analytic") {
  const auto s = spectrum_sweep(Params::make(1, 1, 2, 2), geometric_grid(1e2, 1e10, 161), 2);
  CHECK(gevrey_exponent_estimate(s).mu_hat >= 0.97);
}

TEST_CASE("sweep: outside sample has a vertical-asymptote branch") {
  const auto s = spectrum_sweep(Params::make(0.25, 0.75, 1, 2), geometric_grid(1e2, 1e10, 161), 2);
  const auto est = gevrey_exponent_estimate(s);
  CHECK(est.not_differentiable);
  CHECK(est.mu_hat == 0.0);
}

TEST_CASE("sweep: thread count does not change results") {
  const auto grid = geometric_grid(1e2, 1e6, 40);
  const Params p = Params::make(0.6, 0.6, 1.5, 2);
  const auto a = spectrum_sweep(p, grid, 1);
  const auto b = spectrum_sweep(p, grid, 4);
  for (int k = 0; k < 4; ++k) CHECK(a.branches[k] == b.branches[k]);
}
