#include "gevrey/params.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace gevrey {

namespace {

std::string fmt_point(double alpha, double beta, double gamma) {
  std::ostringstream os;
  os.precision(17);
  os << "(alpha=" << alpha << ", beta=" << beta << ", gamma=" << gamma << ")";
  return os.str();
}

// Boundary curve shared by R4 and R5 when gamma > 1.
double r45_curve(double alpha, double gamma) {
  return (4.0 * alpha * alpha - 2.0 * alpha * gamma) / (4.0 * alpha - gamma - 1.0);
}

bool in_R_gamma(double al, double be, double g) {
  if (!in_E(al, be, g)) return false;
  const double d = 2.0 * al - be;
  const bool edge = (al == (g + 1.0) / 2.0 && be == 1.0);
  if (g > 1.0) {
    const bool body = 0.0 < d && d < g && 2.0 * al + be - g > 0.0 && 0.0 < be && be <= 1.0;
    return body || edge;
  }
  const bool body = 0.0 < d && d < g && 2.0 * al + be + g > 2.0 && 0.0 < be && be <= 1.0;
  return body || edge;
}

bool in_R_tilde(double al, double be) {
  if (!in_E_tilde(al, be)) return false;
  const double d = 2.0 * al - be;
  return (0.0 < d && d < 1.0 && 0.0 < be && be <= 1.0) || (al == 1.0 && be == 1.0);
}

// The corner ((gamma+1)/2, 1, gamma) with gamma in (1, 2].
bool upper_corner(double al, double be, double g) {
  return g > 1.0 && g <= 2.0 && al == (g + 1.0) / 2.0 && be == 1.0;
}

double region_mu(Region r, double al, double be, double g) {
  switch (r) {
    case Region::R1:
    case Region::Rt1:
      return 1.0;
    case Region::R2:
      return 2.0 * (2.0 * al - be) / g;
    case Region::R3:
      return 2.0 * (2.0 * al + be - std::max(g, 2.0 - g)) / g;
    case Region::R4:
      return be / al;
    case Region::R5:
      return 2.0 * (-2.0 * al + be + g) / (-2.0 * al + g + 1.0);
    case Region::Rt2:
      return 2.0 * (2.0 * al - be);
    case Region::Rt3:
      return 2.0 * be;
    case Region::Rt4:
      return (-2.0 * al + be + 1.0) / (1.0 - al);
    case Region::Outside:
      break;
  }
  return 0.0;
}

}  // namespace

bool in_E(double alpha, double beta, double gamma) {
  return 0.5 <= gamma && gamma <= 2.0 && 0.0 <= alpha && alpha <= (gamma + 1.0) / 2.0 &&
         0.0 <= beta && beta <= 1.0;
}

bool in_E_tilde(double alpha, double beta) {
  return 0.0 <= alpha && alpha <= 1.0 && 0.0 <= beta && beta <= 1.0;
}

Params Params::make(double alpha, double beta, double gamma, double a, double b, double k) {
  Params p = relaxed(alpha, beta, gamma, a, b, k);
  if (!p.in_E) {
    throw std::invalid_argument("params: " + fmt_point(alpha, beta, gamma) + " lies outside E");
  }
  return p;
}

Params Params::relaxed(double alpha, double beta, double gamma, double a, double b, double k) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma)) {
    throw std::invalid_argument("params: exponents must be finite");
  }
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("params: a must be > 0");
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("params: k must be > 0");
  if (b == 0.0 || !std::isfinite(b)) throw std::invalid_argument("params: b must be nonzero");
  Params p;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  p.a = a;
  p.b = b;
  p.k = k;
  p.in_E = gevrey::in_E(alpha, beta, gamma);
  return p;
}

DomainMembership in_regularity_domain(const Params& p) {
  if (p.same_speed()) {
    if (in_R_tilde(p.alpha, p.beta)) return {true, Domain::RTilde};
    return {false, Domain::Outside};
  }
  if (in_R_gamma(p.alpha, p.beta, p.gamma) || upper_corner(p.alpha, p.beta, p.gamma)) {
    return {true, Domain::R};
  }
  return {false, Domain::Outside};
}

bool region_conditions(Region r, double al, double be, double g) {
  switch (r) {
    case Region::R1:
      return 4.0 * al - 2.0 * be - g >= 0.0 &&
             2.0 * al - 2.0 * be + std::max(1.0 - g, 0.0) <= 0.0;
    case Region::R2:
      return 2.0 * al - be > 0.0 && 4.0 * al - 2.0 * be - g < 0.0 &&
             be >= std::max(1.0 - g / 2.0, g / 2.0);
    case Region::R3:
      return 2.0 * al + be - std::max(g, 2.0 - g) > 0.0 && al <= std::max(1.0, g) / 2.0 &&
             be < std::max(1.0 - g / 2.0, g / 2.0);
    case Region::R4:
      return g > 1.0 && al > be && al > g / 2.0 && be > r45_curve(al, g);
    case Region::R5:
      if (g <= 1.0) {
        return 2.0 * al - be - g < 0.0 && 0.5 < al && al < (g + 1.0) / 2.0 &&
               2.0 * al - 2.0 * be - g + 1.0 > 0.0;
      }
      // alpha > gamma/2 keeps R5 off R2 and R3 (the gamma <= 1 branch has 1/2 < alpha).
      return 2.0 * al - be - g < 0.0 && al > g / 2.0 && be <= r45_curve(al, g);
    case Region::Rt1:
      return al <= be && 2.0 * al - be >= 0.5;
    case Region::Rt2:
      return al <= be && 0.0 < 2.0 * al - be && 2.0 * al - be < 0.5;
    case Region::Rt3:
      return al > be && al <= 0.5;
    case Region::Rt4:
      return al > be && al > 0.5 && 2.0 * al - be < 1.0;
    case Region::Outside:
      break;
  }
  return false;
}

RegularityVerdict classify_regularity(const Params& p) {
  RegularityVerdict v;
  v.kind = Regularity::NotDifferentiable;
  v.mu = 0.0;
  v.delta_inf = std::numeric_limits<double>::infinity();
  v.region = Region::Outside;

  const double al = p.alpha, be = p.beta, g = p.gamma;
  if (!in_E(al, be, g)) {
    v.diagnostic = "outside E: " + fmt_point(al, be, g);
    return v;
  }
  const DomainMembership m = in_regularity_domain(p);
  if (!m.inside) {
    v.diagnostic = p.same_speed() ? "outside R~" : "outside R(gamma)";
    return v;
  }

  Region found = Region::Outside;
  if (m.tag == Domain::R && upper_corner(al, be, g)) {
    found = Region::R4;
  } else {
    static const std::array<Region, 5> diff{Region::R1, Region::R2, Region::R3, Region::R4,
                                            Region::R5};
    static const std::array<Region, 4> same{Region::Rt1, Region::Rt2, Region::Rt3,
                                            Region::Rt4};
    std::vector<Region> hits;
    if (m.tag == Domain::RTilde) {
      for (Region r : same)
        if (region_conditions(r, al, be, g)) hits.push_back(r);
    } else {
      for (Region r : diff)
        if (region_conditions(r, al, be, g)) hits.push_back(r);
    }
    if (hits.size() != 1) {
      std::string names;
      for (Region r : hits) names += " " + to_string(r);
      throw AmbiguousBoundary("classify_regularity: " + fmt_point(al, be, g) + " matches " +
                              std::to_string(hits.size()) + " subregions" + names);
    }
    found = hits.front();
  }

  v.region = found;
  v.mu = region_mu(found, al, be, g);
  if (found == Region::R1 || found == Region::Rt1) {
    v.kind = Regularity::Analytic;
    v.mu = 1.0;
  } else {
    v.kind = Regularity::Gevrey;
  }
  v.delta_inf = 1.0 / v.mu;
  return v;
}

std::string to_string(Domain d) {
  switch (d) {
    case Domain::R: return "R(gamma)";
    case Domain::RTilde: return "R~";
    case Domain::Outside: return "Outside";
  }
  return "?";
}

std::string to_string(Region r) {
  switch (r) {
    case Region::R1: return "R1";
    case Region::R2: return "R2";
    case Region::R3: return "R3";
    case Region::R4: return "R4";
    case Region::R5: return "R5";
    case Region::Rt1: return "R~1";
    case Region::Rt2: return "R~2";
    case Region::Rt3: return "R~3";
    case Region::Rt4: return "R~4";
    case Region::Outside: return "Outside";
  }
  return "?";
}

std::string to_string(Regularity k) {
  switch (k) {
    case Regularity::Analytic: return "Analytic";
    case Regularity::Gevrey: return "Gevrey";
    case Regularity::NotDifferentiable: return "NotDifferentiable";
  }
  return "?";
}

// ---------------------------------------------------------------------------

const std::vector<Cell>& different_speed_cells() {
  static const std::vector<Cell> cells{
      Cell::V1,     Cell::V2,     Cell::V3,     Cell::V4,       Cell::V5,       Cell::V6,
      Cell::F12,    Cell::F13,    Cell::F24,    Cell::F34,      Cell::F35,      Cell::F46,
      Cell::F56,    Cell::L1234,  Cell::L3456,  Cell::F1,       Cell::L12,      Cell::L15,
      Cell::L26,    Cell::P1256,  Cell::Vbar1,  Cell::Vbar2,    Cell::Vbar3,    Cell::Vbar4,
      Cell::Vbar5,  Cell::Vbar6,  Cell::Fbar12, Cell::Fbar13,   Cell::Fbar24,   Cell::Fbar34,
      Cell::Fbar35, Cell::Fbar46, Cell::Fbar56, Cell::Lbar1234, Cell::Lbar3456};
  return cells;
}

const std::vector<Cell>& same_speed_cells() {
  static const std::vector<Cell> cells{Cell::Ft1,  Cell::Ft2,  Cell::Ft3,  Cell::Ft4,
                                       Cell::Ft5,  Cell::Lt13, Cell::Lt12, Cell::Lt35,
                                       Cell::Lt24, Cell::Lt45, Cell::Pt12345};
  return cells;
}

bool cell_member(Cell c, double a, double b, double g) {
  const bool upper = 1.0 < g && g <= 2.0;
  const bool lower = 0.5 <= g && g < 1.0;
  switch (c) {
    case Cell::Ft1: case Cell::Ft2: case Cell::Ft3: case Cell::Ft4: case Cell::Ft5:
    case Cell::Lt13: case Cell::Lt12: case Cell::Lt35: case Cell::Lt24: case Cell::Lt45:
    case Cell::Pt12345:
      if (!in_E_tilde(a, b)) return false;
      break;
    default:
      if (!in_E(a, b, g)) return false;
      break;
  }
  switch (c) {
    case Cell::V1:
      return 0.0 <= a && a < g / 2.0 && 0.0 <= b && b < 0.5 && upper;
    case Cell::V2:
      return g / 2.0 < a && a <= (g + 1.0) / 2.0 && 2.0 * a - 2.0 * b - g + 1.0 > 0.0 &&
             0.0 <= b && 1.0 <= g && g <= 2.0;
    case Cell::V3:
      return 0.0 <= a && a < g / 2.0 && 0.5 < b && b < g / 2.0 && upper;
    case Cell::V4:
      return g / 2.0 < a && a < (g + 1.0) / 2.0 && b <= 1.0 && b < a &&
             2.0 * a - 2.0 * b - g + 1.0 < 0.0 && upper;
    case Cell::V5:
      return 0.0 <= a && g / 2.0 < b && b <= 1.0 && 4.0 * a - 2.0 * b - g < 0.0 && 1.0 <= g &&
             g < 2.0;
    case Cell::V6:
      return 4.0 * a - 2.0 * b - g > 0.0 && a < b && b <= 1.0 && 1.0 <= g && g < 2.0;
    case Cell::F12:
      return a == g / 2.0 && 0.0 <= b && b < 0.5 && upper;
    case Cell::F13:
      return 0.0 <= a && a < g / 2.0 && b == 0.5 && upper;
    case Cell::F24:
      return g / 2.0 < a && a <= (1.0 + g) / 2.0 && 2.0 * a - 2.0 * b - g + 1.0 == 0.0 && upper;
    case Cell::F34:
      return a == g / 2.0 && 0.5 < b && b < g / 2.0 && upper;
    case Cell::F35:
      return 0.0 <= a && a < g / 2.0 && b == g / 2.0 && upper;
    case Cell::F46:
      return g / 2.0 < a && a <= 1.0 && b == a && 1.0 < g && g < 2.0;
    case Cell::F56:
      return g / 2.0 < a && a <= (g + 2.0) / 4.0 && 4.0 * a - 2.0 * b - g == 0.0 && 1.0 <= g &&
             g < 2.0;
    case Cell::L1234:
      return a == g / 2.0 && b == 0.5 && upper;
    case Cell::L3456:
      return a == g / 2.0 && b == g / 2.0 && upper;
    case Cell::F1:
      return 0.0 <= a && a < 0.5 && 0.0 <= b && b < 0.5 && g == 1.0;
    case Cell::L12:
      return a == 0.5 && 0.0 <= b && b < 0.5 && g == 1.0;
    case Cell::L15:
      return 0.0 <= a && a < 0.5 && b == 0.5 && g == 1.0;
    case Cell::L26:
      return 0.5 < a && a <= 1.0 && b == a && g == 1.0;
    case Cell::P1256:
      return a == 0.5 && b == 0.5 && g == 1.0;
    case Cell::Vbar1:
      return 0.0 <= a && a < 0.5 && 0.0 <= b && b < 0.5 && lower;
    case Cell::Vbar2:
      return 0.5 < a && a <= (g + 1.0) / 2.0 && 0.0 <= b && b < a && lower;
    case Cell::Vbar3:
      return 0.0 <= a && a < 0.5 && 0.5 < b && b < 1.0 - g / 2.0 && lower;
    case Cell::Vbar4:
      return 0.5 < a && a <= (g + 1.0) / 2.0 && b > a && 2.0 * a - 2.0 * b - g + 1.0 > 0.0 &&
             lower;
    case Cell::Vbar5:
      return 0.0 <= a && 1.0 - g / 2.0 < b && b <= 1.0 && 4.0 * a - 2.0 * b - g < 0.0 && lower;
    case Cell::Vbar6:
      return 4.0 * a - 2.0 * b - g > 0.0 && 2.0 * a - 2.0 * b - g + 1.0 < 0.0 && b <= 1.0 &&
             lower;
    case Cell::Fbar12:
      return a == 0.5 && 0.0 <= b && b < 0.5 && lower;
    case Cell::Fbar13:
      return 0.0 <= a && a < 0.5 && b == 0.5 && lower;
    case Cell::Fbar24:
      return 0.5 < a && a <= (1.0 + g) / 2.0 && b == a && lower;
    case Cell::Fbar34:
      return a == 0.5 && 0.5 < b && b < 1.0 - g / 2.0 && lower;
    case Cell::Fbar35:
      return 0.0 <= a && a < 0.5 && b == 1.0 - g / 2.0 && lower;
    case Cell::Fbar46:
      return 0.5 < a && a <= (1.0 + g) / 2.0 && 2.0 * a - 2.0 * b - g + 1.0 == 0.0 && lower;
    case Cell::Fbar56:
      return 0.5 < a && a <= (g + 2.0) / 4.0 && 4.0 * a - 2.0 * b - g == 0.0 && lower;
    case Cell::Lbar1234:
      return a == 0.5 && b == 0.5 && lower;
    case Cell::Lbar3456:
      return a == 0.5 && b == 1.0 - g / 2.0 && lower;
    case Cell::Ft1:
      return b < a && a < 0.5 && 0.0 < b && b < 0.5;
    case Cell::Ft2:
      return 0.5 < a && a <= 1.0 && 0.0 <= b && b < a;
    case Cell::Ft3:
      return 0.0 <= a && a < b && 0.0 < b && b < 0.5;
    case Cell::Ft5:
      return 0.0 <= a && 0.5 < b && b <= 1.0 && 4.0 * a - 2.0 * b - 1.0 < 0.0;
    case Cell::Ft4:
      return 4.0 * a - 2.0 * b - 1.0 > 0.0 && a < b && b <= 1.0;
    case Cell::Lt13:
      return 0.0 <= a && a < 0.5 && b == a;
    case Cell::Lt12:
      return a == 0.5 && 0.0 <= b && b < 0.5;
    case Cell::Lt35:
      return 0.0 <= a && a < 0.5 && b == 0.5;
    case Cell::Lt24:
      return 0.5 < a && a <= 1.0 && b == a;
    case Cell::Lt45:
      return 0.5 < a && a <= 0.75 && 4.0 * a - 2.0 * b - 1.0 == 0.0;
    case Cell::Pt12345:
      return a == 0.5 && b == 0.5;
  }
  return false;
}

Cell partition_cell(const Params& p) {
  const bool same = p.same_speed();
  const auto& table = same ? same_speed_cells() : different_speed_cells();
  std::vector<Cell> hits;
  for (Cell c : table)
    if (cell_member(c, p.alpha, p.beta, p.gamma)) hits.push_back(c);
  if (hits.empty()) {
    throw NoCell("partition_cell: no cell contains " + fmt_point(p.alpha, p.beta, p.gamma) +
                 (same ? " (same-speed table)" : " (different-speed table)"));
  }
  if (hits.size() > 1) {
    std::string names;
    for (Cell c : hits) names += " " + to_string(c);
    throw CellOverlap("partition_cell: " + fmt_point(p.alpha, p.beta, p.gamma) +
                      " lies in several cells:" + names);
  }
  return hits.front();
}

std::string to_string(Cell c) {
  static const std::map<Cell, std::string> names{
      {Cell::V1, "V1"},           {Cell::V2, "V2"},           {Cell::V3, "V3"},
      {Cell::V4, "V4"},           {Cell::V5, "V5"},           {Cell::V6, "V6"},
      {Cell::F12, "F12"},         {Cell::F13, "F13"},         {Cell::F24, "F24"},
      {Cell::F34, "F34"},         {Cell::F35, "F35"},         {Cell::F46, "F46"},
      {Cell::F56, "F56"},         {Cell::L1234, "L1234"},     {Cell::L3456, "L3456"},
      {Cell::F1, "F1"},           {Cell::L12, "L12"},         {Cell::L15, "L15"},
      {Cell::L26, "L26"},         {Cell::P1256, "P1256"},     {Cell::Vbar1, "Vbar1"},
      {Cell::Vbar2, "Vbar2"},     {Cell::Vbar3, "Vbar3"},     {Cell::Vbar4, "Vbar4"},
      {Cell::Vbar5, "Vbar5"},     {Cell::Vbar6, "Vbar6"},     {Cell::Fbar12, "Fbar12"},
      {Cell::Fbar13, "Fbar13"},   {Cell::Fbar24, "Fbar24"},   {Cell::Fbar34, "Fbar34"},
      {Cell::Fbar35, "Fbar35"},   {Cell::Fbar46, "Fbar46"},   {Cell::Fbar56, "Fbar56"},
      {Cell::Lbar1234, "Lbar1234"}, {Cell::Lbar3456, "Lbar3456"}, {Cell::Ft1, "Ft1"},
      {Cell::Ft2, "Ft2"},         {Cell::Ft3, "Ft3"},         {Cell::Ft4, "Ft4"},
      {Cell::Ft5, "Ft5"},         {Cell::Lt13, "Lt13"},       {Cell::Lt12, "Lt12"},
      {Cell::Lt35, "Lt35"},       {Cell::Lt24, "Lt24"},       {Cell::Lt45, "Lt45"},
      {Cell::Pt12345, "Pt12345"}};
  return names.at(c);
}

std::optional<Cell> cell_from_string(const std::string& s) {
  for (const auto* table : {&different_speed_cells(), &same_speed_cells()})
    for (Cell c : *table)
      if (to_string(c) == s) return c;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

StabilityInfo stability_order(SRegion s, const Params& p) {
  StabilityInfo info;
  info.s_region = s;
  const double al = p.alpha, be = p.beta, g = p.gamma;
  double order = 0.0;
  switch (s) {
    case SRegion::S1:
    case SRegion::St1:
      info.kind = StabilityKind::Exponential;
      return info;
    case SRegion::S5:
      info.kind = StabilityKind::Strong;
      return info;
    case SRegion::S2:
      order = g / (2.0 * (be - 2.0 * al));
      break;
    case SRegion::S3:
      order = g / (2.0 * (std::abs(g - 1.0) + 1.0 - be - 2.0 * al));
      break;
    case SRegion::S4:
      if (p.same_speed())
        order = (1.0 - al) / (2.0 * al - be - 1.0);
      else
        order = (g + 1.0 - 2.0 * al) / (2.0 * (2.0 * al - be - g));
      break;
    case SRegion::St2:
      order = 1.0 / (2.0 * (be - 2.0 * al));
      break;
  }
  if (!(order > 0.0) || !std::isfinite(order)) {
    std::ostringstream os;
    os << "stability_order: " << to_string(s) << " gives order " << order << " at "
       << fmt_point(al, be, g);
    throw NonPositiveOrder(os.str());
  }
  info.kind = StabilityKind::Polynomial;
  info.poly_order = order;
  return info;
}

std::string to_string(SRegion s) {
  switch (s) {
    case SRegion::S1: return "S1";
    case SRegion::S2: return "S2";
    case SRegion::S3: return "S3";
    case SRegion::S4: return "S4";
    case SRegion::S5: return "S5";
    case SRegion::St1: return "S~1";
    case SRegion::St2: return "S~2";
  }
  return "?";
}

std::optional<SRegion> sregion_from_string(const std::string& s) {
  for (SRegion r : {SRegion::S1, SRegion::S2, SRegion::S3, SRegion::S4, SRegion::S5,
                    SRegion::St1, SRegion::St2})
    if (to_string(r) == s) return r;
  if (s == "St1") return SRegion::St1;
  if (s == "St2") return SRegion::St2;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

// A boundary line na*alpha + nb*beta = c at fixed gamma; expr is the literal
// expression used by the membership predicates (zero on the line).
struct Line {
  double na, nb, c;
  std::function<double(double, double)> expr;
};

std::vector<Line> boundary_lines(double g) {
  std::vector<Line> L;
  auto add = [&](double na, double nb, double c, std::function<double(double, double)> e) {
    L.push_back({na, nb, c, std::move(e)});
  };
  const double gm = std::max(g, 2.0 - g);
  const double bm = std::max(1.0 - g / 2.0, g / 2.0);
  const double am = std::max(1.0, g) / 2.0;
  const double r1 = std::max(1.0 - g, 0.0);
  add(1, 0, 0.0, [](double a, double) { return a; });
  add(1, 0, (g + 1.0) / 2.0, [g](double a, double) { return a - (g + 1.0) / 2.0; });
  add(1, 0, g / 2.0, [g](double a, double) { return a - g / 2.0; });
  add(1, 0, 0.5, [](double a, double) { return a - 0.5; });
  add(1, 0, 1.0, [](double a, double) { return a - 1.0; });
  add(1, 0, 0.75, [](double a, double) { return a - 0.75; });
  add(1, 0, (g + 2.0) / 4.0, [g](double a, double) { return a - (g + 2.0) / 4.0; });
  add(1, 0, am, [am](double a, double) { return a - am; });
  add(0, 1, 0.0, [](double, double b) { return b; });
  add(0, 1, 1.0, [](double, double b) { return b - 1.0; });
  add(0, 1, 0.5, [](double, double b) { return b - 0.5; });
  add(0, 1, g / 2.0, [g](double, double b) { return b - g / 2.0; });
  add(0, 1, 1.0 - g / 2.0, [g](double, double b) { return b - (1.0 - g / 2.0); });
  add(0, 1, bm, [bm](double, double b) { return b - bm; });
  add(-1, 1, 0.0, [](double a, double b) { return b - a; });
  add(2, -1, 0.0, [](double a, double b) { return 2.0 * a - b; });
  add(2, -1, g, [g](double a, double b) { return 2.0 * a - b - g; });
  add(2, -1, 0.5, [](double a, double b) { return 2.0 * a - b - 0.5; });
  add(2, -1, 1.0, [](double a, double b) { return 2.0 * a - b - 1.0; });
  add(2, 1, g, [g](double a, double b) { return 2.0 * a + b - g; });
  add(2, 1, 2.0 - g, [g](double a, double b) { return 2.0 * a + b + g - 2.0; });
  add(2, 1, gm, [gm](double a, double b) { return 2.0 * a + b - gm; });
  add(4, -2, g, [g](double a, double b) { return 4.0 * a - 2.0 * b - g; });
  add(4, -2, 1.0, [](double a, double b) { return 4.0 * a - 2.0 * b - 1.0; });
  add(2, -2, g - 1.0, [g](double a, double b) { return 2.0 * a - 2.0 * b - g + 1.0; });
  add(2, -2, -r1, [r1](double a, double b) { return 2.0 * a - 2.0 * b + r1; });
  return L;
}

// Nudges (a, b) by a few ulps until every expression vanishes exactly.
void make_exact(double& a, double& b, const std::vector<const Line*>& lines) {
  auto ok = [&](double x, double y) {
    for (const Line* l : lines)
      if (l->expr(x, y) != 0.0) return false;
    return true;
  };
  if (ok(a, b)) return;
  for (int r = 1; r <= 6; ++r) {
    double xa = a, xb = b;
    std::vector<double> as{a}, bs{b};
    for (int i = 0; i < r; ++i) {
      xa = std::nextafter(xa, -1e300);
      xb = std::nextafter(xb, -1e300);
    }
    double ya = a, yb = b;
    for (int i = 0; i < r; ++i) {
      ya = std::nextafter(ya, 1e300);
      yb = std::nextafter(yb, 1e300);
    }
    for (double ca : {a, xa, ya})
      for (double cb : {b, xb, yb})
        if (ok(ca, cb)) {
          a = ca;
          b = cb;
          return;
        }
  }
}

double line_distance(const Line& l, double a, double b) {
  return std::abs(l.na * a + l.nb * b - l.c) / std::hypot(l.na, l.nb);
}

void project(const Line& l, double& a, double& b) {
  const double n2 = l.na * l.na + l.nb * l.nb;
  const double r = (l.na * a + l.nb * b - l.c) / n2;
  a -= r * l.na;
  b -= r * l.nb;
  if (l.nb == 0.0) a = l.c / l.na;
  if (l.na == 0.0) b = l.c / l.nb;
}

}  // namespace

double boundary_margin(double alpha, double beta, double gamma) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& l : boundary_lines(gamma)) {
    const double d = line_distance(l, alpha, beta);
    if (d > 1e-12) m = std::min(m, d);
  }
  return m;
}

Params snap(const Params& p, double eps) {
  if (!(eps > 0.0)) return p;
  Params q = p;
  for (double g0 : {0.5, 1.0, 2.0})
    if (std::abs(q.gamma - g0) <= eps) q.gamma = g0;
  if (std::abs(q.a - 1.0) <= eps) q.a = 1.0;

  const std::vector<Line> lines = boundary_lines(q.gamma);
  double a = q.alpha, b = q.beta;

  const Line* first = nullptr;
  double best = eps;
  for (const auto& l : lines) {
    const double d = line_distance(l, a, b);
    if (d <= best) {
      best = d;
      first = &l;
    }
  }
  if (first != nullptr) {
    project(*first, a, b);
    const Line* second = nullptr;
    double best2 = eps;
    for (const auto& l : lines) {
      if (&l == first) continue;
      const double det = first->na * l.nb - first->nb * l.na;
      if (std::abs(det) < 1e-12) continue;
      const double d = line_distance(l, a, b);
      if (d <= best2) {
        best2 = d;
        second = &l;
      }
    }
    if (second != nullptr) {
      const double det = first->na * second->nb - first->nb * second->na;
      a = (first->c * second->nb - first->nb * second->c) / det;
      b = (first->na * second->c - first->c * second->na) / det;
      if (first->nb == 0.0) a = first->c / first->na;
      if (second->nb == 0.0) a = second->c / second->na;
      if (first->na == 0.0) b = first->c / first->nb;
      if (second->na == 0.0) b = second->c / second->nb;
      make_exact(a, b, {first, second});
    } else {
      make_exact(a, b, {first});
    }
  } else if (q.gamma > 1.0 && 4.0 * a - q.gamma - 1.0 > 0.0) {
    const double c = r45_curve(a, q.gamma);
    if (std::abs(b - c) <= eps) b = c;
  }
  q.alpha = a;
  q.beta = b;
  q.in_E = in_E(q.alpha, q.beta, q.gamma);
  return q;
}

}  // namespace gevrey
