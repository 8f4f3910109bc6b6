#include "gevrey/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "gevrey/modal_spectrum.hpp"
#include "gevrey/polynomial_roots.hpp"

namespace gevrey {

namespace {

using cplx = std::complex<double>;

bool nonzero_part(double part, double mag, double tol) { return std::abs(part) > tol * mag; }

// Dominant form among monomials whose value equals the max (smallest form wins ties).
AffineExponent dominant_form(const ExponentPoint& pt, const Params& prm, double tol) {
  std::optional<AffineExponent> best;
  for (const auto& m : pt.contributions) {
    if (std::abs(m.power.value(prm) - pt.exponent) > tol) continue;
    if (!best || m.power < *best) best = m.power;
  }
  if (!best) return AffineExponent::constant(0);
  return *best;
}

std::vector<Monomial> combine(const std::vector<Monomial>& in, const Params& prm,
                              const ExpansionOptions& opt) {
  struct Group {
    double value;
    AffineExponent form;
    cplx sum;
    double mag;
  };
  std::vector<Group> groups;
  for (const auto& m : in) {
    const double v = m.power.value(prm);
    bool merged = false;
    for (auto& g : groups) {
      if (g.form == m.power || std::abs(g.value - v) <= opt.exponent_tolerance) {
        g.sum += m.coeff;
        g.mag += std::abs(m.coeff);
        if (m.power < g.form) g.form = m.power;
        merged = true;
        break;
      }
    }
    if (!merged) groups.push_back({v, m.power, m.coeff, std::abs(m.coeff)});
  }
  std::vector<Monomial> out;
  for (const auto& g : groups) {
    if (std::abs(g.sum) <= opt.cancel_tolerance * g.mag) continue;
    out.push_back({g.sum, g.form});
  }
  std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) {
    return a.power.value(prm) > b.power.value(prm);
  });
  return out;
}

// P(lambda) -> P(z mu^p + lambda).
GenPoly shift(const GenPoly& P, cplx z, const AffineExponent& p, const Params& prm,
              const ExpansionOptions& opt) {
  const int n = static_cast<int>(P.coeff.size()) - 1;
  GenPoly out;
  out.real_coefficients = P.real_coefficients && z.imag() == 0.0;
  out.coeff.resize(P.coeff.size());
  for (int j = 0; j <= n; ++j) {
    std::vector<Monomial> acc;
    for (int i = j; i <= n; ++i) {
      const int m = i - j;
      double binom = 1.0;
      for (int t = 1; t <= m; ++t) binom = binom * (j + t) / t;
      const cplx zm = std::pow(z, m);
      const AffineExponent shift_power = Rational(m) * p;
      for (const auto& mono : P.coeff[static_cast<std::size_t>(i)]) {
        acc.push_back({binom * mono.coeff * zm, mono.power + shift_power});
      }
    }
    out.coeff[static_cast<std::size_t>(j)] = combine(acc, prm, opt);
  }
  return out;
}

struct PartInfo {
  std::optional<std::size_t> real_idx;
  std::optional<std::size_t> imag_idx;
  bool all_real{true};
};

PartInfo part_info(const std::vector<Term>& terms) {
  PartInfo info;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double mag = std::abs(terms[i].coeff);
    if (!info.real_idx && nonzero_part(terms[i].coeff.real(), mag, 1e-9)) info.real_idx = i;
    if (nonzero_part(terms[i].coeff.imag(), mag, 1e-9)) {
      info.all_real = false;
      if (!info.imag_idx) info.imag_idx = i;
    }
  }
  return info;
}

AsymptoticBranch make_branch(const std::vector<Term>& terms, int segment, bool degenerate,
                             bool real_valued, bool exact) {
  AsymptoticBranch b;
  b.terms = terms;
  b.segment = segment;
  b.degenerate = degenerate;
  b.real_valued = real_valued;
  b.exact = exact;
  if (!terms.empty()) b.leading_power = terms.front().value;
  const PartInfo info = part_info(terms);
  if (info.real_idx) {
    b.real_part_power = terms[*info.real_idx].value;
    b.real_part_form = terms[*info.real_idx].power;
  }
  if (info.imag_idx) {
    b.imag_part_power = terms[*info.imag_idx].value;
    b.imag_part_form = terms[*info.imag_idx].power;
  }
  b.complete = info.real_idx.has_value();
  return b;
}

struct Ctx {
  const Params& prm;
  const ExpansionOptions& opt;
};

void expand(const GenPoly& P, const Ctx& ctx, const std::vector<Term>& prefix, double p_upper,
            int needed, int levels_left, int seg_tag, bool degen,
            std::vector<AsymptoticBranch>& out) {
  const std::vector<ExponentPoint> pts = exponent_points(P, ctx.prm);
  int produced = 0;
  const bool prefix_real = P.real_coefficients;

  if (pts.empty()) return;
  const int d0 = pts.front().degree;
  for (int i = 0; i < d0 && produced < needed; ++i, ++produced) {
    out.push_back(make_branch(prefix, seg_tag, degen, prefix_real && part_info(prefix).all_real,
                              true));
  }

  const std::vector<HullSegment> segs = newton_polygon(pts, ctx.opt.exponent_tolerance);
  int seg_index = 0;
  for (const auto& seg : segs) {
    const int tag = prefix.empty() ? seg_index : seg_tag;
    ++seg_index;
    if (std::isfinite(p_upper) &&
        !(seg.p < p_upper - ctx.opt.exponent_tolerance * std::max(1.0, std::abs(p_upper))))
      continue;
    const ExponentPoint* lo = nullptr;
    const ExponentPoint* hi = nullptr;
    for (const auto& pt : pts) {
      if (pt.degree == seg.deg_lo) lo = &pt;
      if (pt.degree == seg.deg_hi) hi = &pt;
    }
    const AffineExponent p_form =
        Rational(1, seg.span()) *
        (dominant_form(*lo, ctx.prm, ctx.opt.exponent_tolerance) -
         dominant_form(*hi, ctx.prm, ctx.opt.exponent_tolerance));
    const double p_value = p_form.value(ctx.prm);

    for (const auto& bal : leading_balance(seg, pts)) {
      std::vector<Term> terms = prefix;
      terms.push_back({bal.z, p_form, p_value});
      const PartInfo info = part_info(terms);
      const bool simple = bal.multiplicity == 1;
      const bool real_valued = prefix_real && info.all_real && simple && !degen;
      const bool resolved = info.real_idx.has_value() &&
                            (info.imag_idx.has_value() || real_valued);
      const bool stop = simple && static_cast<int>(terms.size()) >= ctx.opt.min_terms && resolved;
      if (stop || levels_left <= 1) {
        for (int m = 0; m < bal.multiplicity && produced < needed; ++m, ++produced) {
          AsymptoticBranch b = make_branch(terms, tag, degen || !simple, real_valued, false);
          if (!simple) b.complete = false;
          out.push_back(std::move(b));
        }
        continue;
      }
      const GenPoly P1 = shift(P, bal.z, p_form, ctx.prm, ctx.opt);
      const std::size_t before = out.size();
      expand(P1, ctx, terms, p_value, bal.multiplicity, levels_left - 1, tag,
             degen || !simple, out);
      produced += static_cast<int>(out.size() - before);
    }
  }
  // Roots the polygon failed to account for (cancellation misjudged).
  for (; produced < needed; ++produced) {
    AsymptoticBranch b = make_branch(prefix, seg_tag, degen, false, false);
    b.complete = false;
    out.push_back(std::move(b));
  }
}

std::string slice_form(const std::optional<AffineExponent>& f, double gamma) {
  if (!f) return "-";
  auto c = f->on_slice(gamma);
  std::ostringstream os;
  for (std::size_t i = 0; i < 3; ++i) {
    double v = std::round(c[i] * 1e9) / 1e9;
    if (v == 0.0) v = 0.0;
    if (i) os << ",";
    os << v;
  }
  return os.str();
}

constexpr int kMaxSignatureDepth = 256;
constexpr long kMaxScanTries = 1000000;
constexpr double kScanMargin = 0.01;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<HullSegment> newton_polygon(const std::vector<ExponentPoint>& points_in, double tol) {
  std::vector<ExponentPoint> pts = points_in;
  std::sort(pts.begin(), pts.end(),
            [](const ExponentPoint& a, const ExponentPoint& b) { return a.degree < b.degree; });
  std::vector<HullSegment> segs;
  if (pts.size() < 2) return segs;

  // Monotone chain; a middle point is dropped when it is not strictly above the chord.
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (hull.size() >= 2) {
      const auto& a = pts[hull[hull.size() - 2]];
      const auto& b = pts[hull.back()];
      const auto& c = pts[i];
      const double t = static_cast<double>(b.degree - a.degree) / (c.degree - a.degree);
      const double chord = a.exponent + t * (c.exponent - a.exponent);
      if (b.exponent <= chord + tol) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const auto& a = pts[hull[h]];
    const auto& b = pts[hull[h + 1]];
    HullSegment s;
    s.deg_lo = a.degree;
    s.deg_hi = b.degree;
    s.p = (a.exponent - b.exponent) / (b.degree - a.degree);
    for (const auto& q : pts) {
      if (q.degree < a.degree || q.degree > b.degree) continue;
      const double line = a.exponent - s.p * (q.degree - a.degree);
      if (std::abs(q.exponent - line) <= tol) s.participating.push_back(q.degree);
    }
    segs.push_back(s);
  }
  return segs;
}

GenPoly characteristic_genpoly(const Params& p) {
  GenPoly g;
  g.coeff.resize(5);
  for (const auto& e : build_quartic(p, 1.0).ledger) {
    g.coeff[static_cast<std::size_t>(e.degree)].push_back({cplx(e.coefficient), e.power});
  }
  g.real_coefficients = true;
  return g;
}

std::vector<ExponentPoint> exponent_points(const GenPoly& poly, const Params& p) {
  std::vector<ExponentPoint> pts;
  for (std::size_t d = 0; d < poly.coeff.size(); ++d) {
    const auto& c = poly.coeff[d];
    if (c.empty()) continue;
    ExponentPoint pt;
    pt.degree = static_cast<int>(d);
    pt.exponent = -std::numeric_limits<double>::infinity();
    pt.contributions = c;
    for (auto& m : pt.contributions) {
      m.value = m.power.value(p);
      pt.exponent = std::max(pt.exponent, m.value);
    }
    pts.push_back(std::move(pt));
  }
  return pts;
}

std::vector<std::complex<double>> reduced_polynomial(const HullSegment& segment,
                                                     const std::vector<ExponentPoint>& points) {
  std::vector<cplx> r(static_cast<std::size_t>(segment.span() + 1), cplx(0.0));
  const ExponentPoint* lo = nullptr;
  for (const auto& pt : points)
    if (pt.degree == segment.deg_lo) lo = &pt;
  if (!lo) throw std::invalid_argument("reduced_polynomial: segment does not match the points");
  for (const auto& pt : points) {
    if (std::find(segment.participating.begin(), segment.participating.end(), pt.degree) ==
        segment.participating.end())
      continue;
    const double line = lo->exponent - segment.p * (pt.degree - segment.deg_lo);
    cplx sum(0.0);
    if (pt.contributions.empty()) {
      sum = 1.0;
    } else {
      const double tol = 1e-9 * std::max(1.0, std::abs(line));
      for (const auto& m : pt.contributions)
        if (std::abs(m.value - line) <= tol) sum += m.coeff;
    }
    r[static_cast<std::size_t>(pt.degree - segment.deg_lo)] = sum;
  }
  return r;
}

std::vector<Balance> leading_balance(const HullSegment& segment,
                                     const std::vector<ExponentPoint>& points,
                                     bool throw_on_degenerate) {
  const std::vector<cplx> r = reduced_polynomial(segment, points);
  if (r.front() == cplx(0.0) || r.back() == cplx(0.0))
    throw std::runtime_error("leading_balance: end coefficients of the segment cancel");
  const PolynomialRoots pr = solve_polynomial(r);
  std::vector<Balance> out;
  for (const cplx z : pr.roots) {
    bool merged = false;
    for (auto& b : out) {
      if (std::abs(b.z - z) <= 1e-6 * std::max(std::abs(b.z), std::abs(z))) {
        b.z = (b.z * static_cast<double>(b.multiplicity) + z) / static_cast<double>(b.multiplicity + 1);
        ++b.multiplicity;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back({z, 1});
  }
  for (auto& b : out) {
    if (std::abs(b.z.imag()) <= 1e-12 * std::abs(b.z)) b.z = cplx(b.z.real(), 0.0);
    if (std::abs(b.z.real()) <= 1e-12 * std::abs(b.z)) b.z = cplx(0.0, b.z.imag());
  }
  std::sort(out.begin(), out.end(), [](const Balance& a, const Balance& b) {
    if (a.z.imag() != b.z.imag()) return a.z.imag() > b.z.imag();
    return a.z.real() > b.z.real();
  });
  if (throw_on_degenerate) {
    for (const auto& b : out) {
      if (b.multiplicity > 1) {
        std::ostringstream os;
        os << "leading_balance: repeated root z=" << b.z << " (multiplicity " << b.multiplicity
           << ")";
        throw DegenerateBalance(os.str(), out);
      }
    }
  }
  return out;
}

std::complex<double> AsymptoticBranch::evaluate(double mu) const {
  return evaluate(mu, terms.size());
}

std::complex<double> AsymptoticBranch::evaluate(double mu, std::size_t n) const {
  if (!(mu > 0.0)) throw std::invalid_argument("AsymptoticBranch::evaluate: mu must be > 0");
  cplx acc(0.0);
  const double lmu = std::log(mu);
  for (std::size_t i = 0; i < std::min(n, terms.size()); ++i)
    acc += terms[i].coeff * std::exp(terms[i].value * lmu);
  return acc;
}

std::vector<AsymptoticBranch> expand_roots(const Params& p, const ExpansionOptions& opt) {
  if (opt.depth < 1) throw std::invalid_argument("expand_roots: depth must be >= 1");
  const Ctx ctx{p, opt};
  std::vector<AsymptoticBranch> out;
  expand(characteristic_genpoly(p), ctx, {}, std::numeric_limits<double>::infinity(), 4,
         opt.depth + 1, 0, false, out);
  if (out.size() != 4) {
    std::ostringstream os;
    os << "expand_roots: produced " << out.size() << " branches instead of 4";
    throw std::runtime_error(os.str());
  }
  return out;
}

AsymptoticBranch refine_branch(const AsymptoticBranch& branch, const Params& p, int depth,
                               const ExpansionOptions& opt) {
  if (depth < 1) throw std::invalid_argument("refine_branch: depth must be >= 1");
  if (branch.terms.empty()) throw std::invalid_argument("refine_branch: branch has no terms");
  if (branch.exact || (branch.complete && (branch.imag_part_power || branch.real_valued)))
    return branch;

  // Re-substitute the known terms, then follow the unique simple correction.
  GenPoly P = characteristic_genpoly(p);
  for (const auto& t : branch.terms) P = shift(P, t.coeff, t.power, p, opt);
  std::vector<Term> terms = branch.terms;
  double p_upper = terms.back().value;

  for (int level = 0; level < depth; ++level) {
    const std::vector<ExponentPoint> pts = exponent_points(P, p);
    if (pts.empty() || pts.front().degree > 0) {
      AsymptoticBranch b = make_branch(terms, branch.segment, branch.degenerate,
                                       P.real_coefficients && part_info(terms).all_real, true);
      return b;
    }
    const std::vector<HullSegment> segs = newton_polygon(pts, opt.exponent_tolerance);
    // The correction of a simple root lives on the first segment (degree 0 to 1).
    const HullSegment* seg = nullptr;
    for (const auto& s : segs) {
      if (s.deg_lo == 0 && s.p < p_upper - opt.exponent_tolerance * std::max(1.0, std::abs(p_upper))) {
        seg = &s;
        break;
      }
    }
    if (!seg) break;
    std::vector<Balance> bals = leading_balance(*seg, pts, true);
    if (bals.size() != 1) {
      throw DegenerateBalance("refine_branch: correction equation has " +
                                  std::to_string(bals.size()) + " solutions",
                              bals);
    }
    const ExponentPoint& lo = pts.front();
    const ExponentPoint* hi = nullptr;
    for (const auto& pt : pts)
      if (pt.degree == seg->deg_hi) hi = &pt;
    const AffineExponent p_form =
        Rational(1, seg->span()) * (dominant_form(lo, p, opt.exponent_tolerance) -
                                    dominant_form(*hi, p, opt.exponent_tolerance));
    const double pv = p_form.value(p);
    terms.push_back({bals.front().z, p_form, pv});
    const PartInfo info = part_info(terms);
    const bool real_valued = P.real_coefficients && info.all_real && !branch.degenerate;
    if (info.real_idx && (info.imag_idx || real_valued)) {
      return make_branch(terms, branch.segment, branch.degenerate, real_valued, false);
    }
    P = shift(P, bals.front().z, p_form, p, opt);
    p_upper = pv;
  }
  AsymptoticBranch b = make_branch(terms, branch.segment, branch.degenerate, false, false);
  b.complete = b.real_part_power.has_value();
  return b;
}

RatioLaw ratio_law(const std::vector<AsymptoticBranch>& branches) {
  RatioLaw law;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const auto& b = branches[i];
    if (!b.imag_part_power || *b.imag_part_power <= kOscillationThreshold) continue;
    if (!b.real_part_power) {
      law.complete = false;
      continue;
    }
    const double r = *b.real_part_power <= 0.0 ? 0.0 : *b.real_part_power / *b.imag_part_power;
    if (*b.real_part_power <= 0.0) law.not_differentiable = true;
    if (r < best) {
      best = r;
      law.worst_branch = static_cast<int>(i);
    }
  }
  if (law.worst_branch >= 0) law.ratio = std::min(best, 1.0);
  return law;
}

Signature branch_signature(const std::vector<AsymptoticBranch>& branches, double gamma) {
  Signature sig;
  for (const auto& b : branches) {
    std::optional<AffineExponent> lead;
    if (!b.terms.empty()) lead = b.terms.front().power;
    sig.push_back("(" + slice_form(lead, gamma) + ";" + slice_form(b.real_part_form, gamma) + ";" +
                  slice_form(b.imag_part_form, gamma) + ")");
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

std::vector<AsymptoticBranch> expand_roots_resolved(const Params& p, const ExpansionOptions& opt,
                                                    int max_depth) {
  // Near a cell boundary the conservative part expands in a small power of mu,
  // so the real part may sit many levels down.
  ExpansionOptions o = opt;
  for (;;) {
    std::vector<AsymptoticBranch> br = expand_roots(p, o);
    if (ratio_law(br).complete || o.depth >= max_depth) return br;
    o.depth = std::min(2 * o.depth, max_depth);
  }
}

Signature point_signature(const Params& p, const ExpansionOptions& opt) {
  return branch_signature(expand_roots_resolved(p, opt, kMaxSignatureDepth), p.gamma);
}

CellScanReport cell_uniformity_scan(Cell cell, int samples, double gamma, std::uint64_t seed,
                                    int jobs) {
  if (samples < 1) throw std::invalid_argument("cell_uniformity_scan: samples must be >= 1");
  const std::string name = to_string(cell);
  const bool same = name.rfind("Ft", 0) == 0 || name.rfind("Lt", 0) == 0 || name.rfind("Pt", 0) == 0;
  CellScanReport rep;
  rep.cell = cell;
  rep.gamma = same ? 1.0 : gamma;
  rep.a = same ? 1.0 : 2.0;
  rep.samples = samples;

  std::mt19937_64 rng(seed);
  const double amax = (rep.gamma + 1.0) / 2.0;
  const double bmax = 1.0;
  // Cells that are lines on the slice are never hit by plain sampling; their
  // samples are snapped onto the nearest printed line instead.
  bool on_line = false;
  for (int pass = 0; pass < 2 && rep.points.empty(); ++pass) {
    on_line = pass == 1;
    for (long tries = 0; static_cast<int>(rep.points.size()) < samples && tries < kMaxScanTries;
         ++tries) {
      Params p = Params::relaxed(uniform01(rng) * amax, uniform01(rng) * bmax, rep.gamma, rep.a);
      if (on_line) p = snap(p, 0.05);
      if (!cell_member(cell, p.alpha, p.beta, p.gamma)) continue;
      if (boundary_margin(p.alpha, p.beta, p.gamma) < kScanMargin) continue;
      rep.points.push_back(p);
    }
  }
  if (rep.points.empty())
    throw std::runtime_error("cell_uniformity_scan: no interior sample found for " + name);

  std::vector<Signature> sigs(rep.points.size());
  std::vector<std::string> errors(rep.points.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < rep.points.size(); i += stride) {
      try {
        sigs[i] = point_signature(rep.points[i]);
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
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty()) throw std::runtime_error(errors[i]);
  rep.signature = sigs.front();
  for (std::size_t i = 1; i < sigs.size(); ++i) {
    if (sigs[i] != rep.signature) {
      throw SignatureMismatch("cell_uniformity_scan: signature differs inside " + name,
                              rep.points.front(), rep.points[i]);
    }
  }
  return rep;
}

}  // namespace gevrey
