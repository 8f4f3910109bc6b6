#include "gevrey/polynomial_roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "gevrey/asymptotics.hpp"

namespace gevrey {

namespace {

using cplx = std::complex<double>;

// Newton ratio p(z)/p'(z); for |z| > 1 it is computed from the reversed
// polynomial so that large coefficients do not overflow the evaluation.
cplx newton_ratio(const std::vector<cplx>& c, cplx z) {
  const int n = static_cast<int>(c.size()) - 1;
  if (std::abs(z) <= 1.0) {
    cplx p = c[static_cast<std::size_t>(n)];
    cplx dp = 0.0;
    for (int i = n - 1; i >= 0; --i) {
      dp = dp * z + p;
      p = p * z + c[static_cast<std::size_t>(i)];
    }
    if (dp == cplx(0.0)) return p == cplx(0.0) ? cplx(0.0) : cplx(1e-3 * (1.0 + std::abs(z)));
    return p / dp;
  }
  const cplx y = 1.0 / z;
  cplx q = c[0];
  cplx dq = 0.0;
  for (int i = 1; i <= n; ++i) {
    dq = dq * y + q;
    q = q * y + c[static_cast<std::size_t>(i)];
  }
  const cplx den = static_cast<double>(n) - y * dq / q;
  if (q == cplx(0.0)) return 0.0;
  return z / den;
}

std::vector<cplx> initial_guesses(const std::vector<cplx>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<ExponentPoint> pts;
  for (int i = 0; i <= n; ++i) {
    const double m = std::abs(c[static_cast<std::size_t>(i)]);
    if (m > 0.0) pts.push_back({i, std::log(m), {}});
  }
  std::vector<cplx> z;
  const double two_pi = 2.0 * std::acos(-1.0);
  int seg_index = 0;
  for (const auto& s : newton_polygon(pts, 1e-9)) {
    const double r = std::exp(s.p);
    const int m = s.span();
    for (int j = 0; j < m; ++j) {
      const double th = two_pi * j / m + 0.7 + 0.37 * seg_index;
      z.push_back(std::polar(r, th));
    }
    ++seg_index;
  }
  return z;
}

cdd horner_dd(const std::vector<cdd>& c, const cdd& z, cdd* deriv) {
  const int n = static_cast<int>(c.size()) - 1;
  cdd p = c[static_cast<std::size_t>(n)];
  cdd dp{dd(0.0), dd(0.0)};
  for (int i = n - 1; i >= 0; --i) {
    if (deriv) dp = dp * z + p;
    p = p * z + c[static_cast<std::size_t>(i)];
  }
  if (deriv) *deriv = dp;
  return p;
}

double residual_dd(const std::vector<cdd>& cdds, const std::vector<cplx>& c, const cdd& z) {
  const cdd p = horner_dd(cdds, z, nullptr);
  const double az = abs_approx(z);
  double den = 0.0;
  double pw = 1.0;
  for (const auto& ci : c) {
    den += std::abs(ci) * pw;
    pw *= az;
  }
  if (den == 0.0) return 0.0;
  return abs_approx(p) / den;
}

void symmetrize_real(std::vector<cdd>& roots) {
  const std::size_t n = roots.size();
  std::vector<std::size_t> pos, neg, real;
  for (std::size_t i = 0; i < n; ++i) {
    const double im = roots[i].im.to_double();
    const double mag = abs_approx(roots[i]);
    if (std::abs(im) <= 1e-18 * mag)
      real.push_back(i);
    else if (im > 0.0)
      pos.push_back(i);
    else
      neg.push_back(i);
  }
  if (pos.size() != neg.size()) return;
  for (std::size_t i : real) roots[i].im = dd(0.0);
  std::vector<std::size_t> perm(neg.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (std::size_t k = 0; k < pos.size(); ++k) {
      const cplx a = roots[pos[k]].to_complex();
      const cplx b = roots[neg[perm[k]]].to_complex();
      cost += std::abs(a - std::conj(b));
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (std::size_t k = 0; k < pos.size(); ++k) {
    cdd& a = roots[pos[k]];
    cdd& b = roots[neg[best[k]]];
    const dd re = (a.re + b.re) * dd(0.5);
    const dd im = (a.im - b.im) * dd(0.5);
    a = {re, im};
    b = {re, -im};
  }
}

}  // namespace

double relative_residual(const std::vector<std::complex<double>>& coeffs, const cdd& z) {
  std::vector<cdd> c;
  c.reserve(coeffs.size());
  for (const auto& x : coeffs) c.emplace_back(x);
  return residual_dd(c, coeffs, z);
}

PolynomialRoots solve_polynomial(const std::vector<std::complex<double>>& coeffs_in,
                                 const RootOptions& opt) {
  std::vector<cplx> c = coeffs_in;
  while (!c.empty() && c.back() == cplx(0.0)) c.pop_back();
  if (c.empty()) throw std::invalid_argument("solve_polynomial: zero polynomial");
  for (const auto& x : c)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      throw std::invalid_argument("solve_polynomial: non-finite coefficient");

  PolynomialRoots out;
  std::size_t zeros = 0;
  while (zeros < c.size() - 1 && c[zeros] == cplx(0.0)) ++zeros;
  for (std::size_t i = 0; i < zeros; ++i) {
    out.roots.emplace_back(0.0);
    out.precise.emplace_back(dd(0.0));
  }
  std::vector<cplx> q(c.begin() + static_cast<std::ptrdiff_t>(zeros), c.end());
  const int n = static_cast<int>(q.size()) - 1;
  if (n == 0) return out;

  const bool real_poly = std::all_of(q.begin(), q.end(), [](cplx x) { return x.imag() == 0.0; });

  std::vector<cplx> z = initial_guesses(q);
  const double eps = std::numeric_limits<double>::epsilon();
  int it = 0;
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  for (; it < opt.max_iterations; ++it) {
    bool all_done = true;
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (done[ui]) continue;
      const cplx ratio = newton_ratio(q, z[ui]);
      cplx sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const cplx d = z[ui] - z[static_cast<std::size_t>(j)];
        if (d != cplx(0.0)) sum += 1.0 / d;
      }
      const cplx w = ratio / (1.0 - ratio * sum);
      if (std::isfinite(w.real()) && std::isfinite(w.imag())) z[ui] -= w;
      if (std::abs(w) <= 4.0 * eps * std::abs(z[ui]) || ratio == cplx(0.0)) {
        done[ui] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) break;
  }
  out.iterations = it;

  std::vector<cdd> cd;
  cd.reserve(q.size());
  for (const auto& x : q) cd.emplace_back(x);

  std::vector<cdd> polished;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    cdd x(z[static_cast<std::size_t>(i)]);
    double best_res = residual_dd(cd, q, x);
    cdd best = x;
    for (int k = 0; k < opt.polish_iterations && best_res > 0.0; ++k) {
      cdd dp;
      const cdd p = horner_dd(cd, x, &dp);
      if (abs_approx(dp) == 0.0) break;
      x = x - p / dp;
      const double r = residual_dd(cd, q, x);
      if (!(r < best_res)) {
        if (r == best_res) break;
        continue;
      }
      best_res = r;
      best = x;
      if (r < 1e-31) break;
    }
    polished.push_back(best);
    worst = std::max(worst, best_res);
  }
  if (real_poly) symmetrize_real(polished);
  worst = 0.0;
  for (const auto& x : polished) worst = std::max(worst, residual_dd(cd, q, x));
  if (!(worst <= opt.residual_tolerance)) {
    std::ostringstream os;
    os << "solve_polynomial: no convergence after " << it << " iterations, best residual "
       << worst;
    throw NoConvergence(os.str(), worst);
  }
  for (const auto& x : polished) {
    out.roots.push_back(x.to_complex());
    out.precise.push_back(x);
  }
  out.max_residual = worst;
  return out;
}

}  // namespace gevrey
