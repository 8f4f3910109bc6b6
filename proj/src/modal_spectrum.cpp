#include "gevrey/modal_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

namespace gevrey {

namespace {

using cplx = std::complex<double>;

std::vector<LedgerEntry> quartic_ledger(const Params& p) {
  const AffineExponent zero;
  const AffineExponent one = AffineExponent::constant(1);
  const AffineExponent al = AffineExponent::alpha();
  const AffineExponent be = AffineExponent::beta();
  const AffineExponent ga = AffineExponent::gamma();
  std::vector<LedgerEntry> L{
      {4, 1.0, zero, 0.0},
      {3, p.k, be, 0.0},
      {2, 1.0, one, 0.0},
      {2, p.b * p.b, Rational(2) * al, 0.0},
      {2, p.a, ga, 0.0},
      {1, p.a * p.k, be + ga, 0.0},
      {0, p.a, one + ga, 0.0},
  };
  for (auto& e : L) e.exponent = e.power.value(p);
  return L;
}

// Reorders the roots at the next grid point to follow the previous ones.
// Returns (best cost, second best cost) over the 24 assignments.
std::pair<double, double> match_next(const std::array<cplx, 4>& prev, std::array<cplx, 4>& next) {
  std::array<int, 4> perm{0, 1, 2, 3};
  std::array<int, 4> best_perm = perm;
  double best = std::numeric_limits<double>::infinity();
  double second = best;
  do {
    double cost = 0.0;
    for (int i = 0; i < 4; ++i) {
      const cplx a = prev[static_cast<std::size_t>(i)];
      const cplx b = next[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
      cost += std::abs(b - a) / std::max(std::abs(a), std::numeric_limits<double>::min());
    }
    if (cost < best) {
      second = best;
      best = cost;
      best_perm = perm;
    } else if (cost < second) {
      second = cost;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::array<cplx, 4> out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = next[static_cast<std::size_t>(best_perm[i])];
  next = out;
  return {best, second};
}

}  // namespace

std::vector<std::complex<double>> ModalQuartic::coefficients() const {
  return {c[0], c[1], c[2], c[3], c[4]};
}

ModalQuartic build_quartic(const Params& p, double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("build_quartic: mu must be > 0");
  ModalQuartic q;
  q.mu = mu;
  q.ledger = quartic_ledger(p);
  const double lmu = std::log(mu);
  const double lmax = std::log(std::numeric_limits<double>::max());
  for (const auto& e : q.ledger) {
    const double lg = std::log(std::abs(e.coefficient)) + e.exponent * lmu;
    if (lg >= lmax) {
      std::ostringstream os;
      os << "build_quartic: coefficient of lambda^" << e.degree << " overflows at mu=" << mu;
      throw Overflow(os.str());
    }
    q.c[static_cast<std::size_t>(e.degree)] += e.coefficient * std::pow(mu, e.exponent);
  }
  for (double x : q.c)
    if (!std::isfinite(x)) throw Overflow("build_quartic: non-finite coefficient");
  return q;
}

ModalQuartic rescale(const ModalQuartic& q, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("rescale: scale must be > 0");
  ModalQuartic r = q;
  for (int i = 0; i < 4; ++i) r.c[static_cast<std::size_t>(i)] = q.c[static_cast<std::size_t>(i)] * std::pow(scale, i - 4);
  r.c[4] = 1.0;
  return r;
}

ModalMatrix modal_matrix(const Params& p, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("modal_matrix: mu must be > 0");
  ModalMatrix m;
  m.mu = mu;
  const double bm = p.b * std::pow(mu, p.alpha);
  m.entries << 0.0, 1.0, 0.0, 0.0,
      -p.a * std::pow(mu, p.gamma), 0.0, 0.0, bm,
      0.0, 0.0, 0.0, 1.0,
      0.0, -bm, -mu, -p.k * std::pow(mu, p.beta);
  return m;
}

PolynomialRoots solve_quartic(const ModalQuartic& q, const RootOptions& opt) {
  return solve_polynomial(q.coefficients(), opt);
}

SpectrumSweep spectrum_sweep(const Params& p, const std::vector<double>& grid, int jobs) {
  if (grid.size() < 8) throw std::invalid_argument("spectrum_sweep: grid needs at least 8 points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("spectrum_sweep: grid must increase");

  const std::size_t n = grid.size();
  std::vector<std::array<cplx, 4>> roots(n);
  std::vector<double> residual(n, 0.0);
  std::vector<std::string> errors(n);

  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < n; i += stride) {
      try {
        const PolynomialRoots r = solve_quartic(build_quartic(p, grid[i]));
        for (std::size_t j = 0; j < 4; ++j) roots[i][j] = r.roots[j];
        residual[i] = r.max_residual;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const std::size_t nthreads = static_cast<std::size_t>(std::max(1, jobs));
  if (nthreads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(work, t, nthreads);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!errors[i].empty()) throw std::runtime_error(errors[i]);

  SpectrumSweep s;
  s.params = p;
  s.mu_grid = grid;
  s.max_residual = *std::max_element(residual.begin(), residual.end());

  std::sort(roots[0].begin(), roots[0].end(), [](cplx a, cplx b) {
    if (a.imag() != b.imag()) return a.imag() > b.imag();
    return a.real() > b.real();
  });
  for (std::size_t i = 1; i < n; ++i) {
    const auto [best, second] = match_next(roots[i - 1], roots[i]);
    if (best > 0.0 && second <= 1.01 * best) {
      std::ostringstream os;
      os << "ambiguous branch assignment between mu=" << grid[i - 1] << " and mu=" << grid[i];
      s.warnings.push_back({SweepWarningKind::BranchSwap, i, os.str()});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b) {
        const double sc = std::max(std::abs(roots[i][a]), std::abs(roots[i][b]));
        if (std::abs(roots[i][a] - roots[i][b]) <= 1e-8 * sc) {
          std::ostringstream os;
          os << "roots " << a << " and " << b << " coincide at mu=" << grid[i];
          s.warnings.push_back({SweepWarningKind::Degenerate, i, os.str()});
        }
      }
  }
  for (std::size_t b = 0; b < 4; ++b) {
    s.branches[b].resize(n);
    for (std::size_t i = 0; i < n; ++i) s.branches[b][i] = roots[i][b];
  }

  const std::size_t window_begin =
      n - std::max<std::size_t>(static_cast<std::size_t>(std::ceil(0.5 * static_cast<double>(n))), 6);
  for (std::size_t b = 0; b < 4; ++b) {
    std::vector<double> re(n), im(n);
    bool re_ok = true, im_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      re[i] = std::abs(s.branches[b][i].real());
      im[i] = std::abs(s.branches[b][i].imag());
      if (i >= window_begin) {
        if (!(re[i] > 0.0)) re_ok = false;
        if (!(im[i] > 0.0)) im_ok = false;
      }
    }
    BranchFit& f = s.fits[b];
    if (re_ok) {
      f.re = fit_exponent(grid, re, 0.5);
      f.re_valid = true;
    }
    if (im_ok) {
      f.im = fit_exponent(grid, im, 0.5);
      f.im_valid = true;
      f.oscillating = f.im.exponent > kOscillationThreshold;
    }
  }
  return s;
}

GevreyEstimate gevrey_exponent_estimate(const SpectrumSweep& s, double min_r_squared) {
  GevreyEstimate g;
  for (std::size_t b = 0; b < 4; ++b) {
    const BranchFit& f = s.fits[b];
    if (!f.oscillating) continue;
    if (f.im.r_squared >= min_r_squared && (!f.re_valid || f.re.exponent < 0.01)) {
      g.mu_hat = 0.0;
      g.not_differentiable = true;
      g.worst_branch = static_cast<int>(b);
      return g;
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < 4; ++b) {
    const BranchFit& f = s.fits[b];
    if (!f.oscillating) continue;
    if (!f.re_valid || f.re.r_squared < min_r_squared || f.im.r_squared < min_r_squared) {
      std::ostringstream os;
      os << "gevrey_exponent_estimate: branch " << b << " fit quality too low (R2 re="
         << (f.re_valid ? f.re.r_squared : 0.0) << ", im=" << f.im.r_squared << ")";
      throw PoorFit(os.str());
    }
    const double ratio = f.re.exponent / f.im.exponent;
    if (ratio < best) {
      best = ratio;
      g.worst_branch = static_cast<int>(b);
    }
  }
  if (g.worst_branch < 0) {
    g.mu_hat = 1.0;
    return g;
  }
  g.mu_hat = std::min(best, 1.0);
  return g;
}

std::string to_string(SweepWarningKind k) {
  return k == SweepWarningKind::BranchSwap ? "BranchSwap" : "Degenerate";
}

}  // namespace gevrey
