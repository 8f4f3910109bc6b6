#include "gevrey/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "gevrey/asymptotics.hpp"

namespace gevrey {

namespace {

double round12(double x) { return std::round(x * 1e12) / 1e12; }

ojson num_or_null(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

template <typename F>
void parallel_for(std::size_t n, int jobs, F&& f) {
  const std::size_t nthreads = static_cast<std::size_t>(std::max(1, jobs));
  std::vector<std::string> errors(nthreads);
  auto work = [&](std::size_t t) {
    try {
      for (std::size_t i = t; i < n; i += nthreads) f(i);
    } catch (const std::exception& e) {
      errors[t] = e.what();
    }
  };
  if (nthreads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
}

std::optional<Region> region_from_string(const std::string& s) {
  for (Region r : {Region::R1, Region::R2, Region::R3, Region::R4, Region::R5, Region::Rt1,
                   Region::Rt2, Region::Rt3, Region::Rt4, Region::Outside})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

std::optional<Regularity> regularity_from_string(const std::string& s) {
  for (Regularity k : {Regularity::Analytic, Regularity::Gevrey, Regularity::NotDifferentiable})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

double parse_double(const std::string& s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("not a number: '" + s + "'");
  return x;
}

// ---- printed boundary lines for the region-map summary ----

struct NamedLine {
  std::string name;
  std::function<double(double, double)> f;  // zero on the line
};

std::vector<NamedLine> printed_lines(double g, bool same) {
  std::vector<NamedLine> L;
  auto add = [&](std::string n, std::function<double(double, double)> f) {
    L.push_back({std::move(n), std::move(f)});
  };
  add("a=0", [](double a, double) { return a; });
  add("b=0", [](double, double b) { return b; });
  add("b=1", [](double, double b) { return b - 1.0; });
  add("2a-b=0", [](double a, double b) { return 2.0 * a - b; });
  add("a-b=0", [](double a, double b) { return a - b; });
  add("a=1/2", [](double a, double) { return a - 0.5; });
  add("b=1/2", [](double, double b) { return b - 0.5; });
  if (same) {
    add("a=1", [](double a, double) { return a - 1.0; });
    add("2a-b=1", [](double a, double b) { return 2.0 * a - b - 1.0; });
    add("2a-b=1/2", [](double a, double b) { return 2.0 * a - b - 0.5; });
    add("4a-2b-1=0", [](double a, double b) { return 4.0 * a - 2.0 * b - 1.0; });
    return L;
  }
  const double gm = std::max(g, 2.0 - g);
  const double bm = std::max(1.0 - g / 2.0, g / 2.0);
  const double am = std::max(1.0, g) / 2.0;
  const double r1 = std::max(1.0 - g, 0.0);
  add("a=(g+1)/2", [g](double a, double) { return a - (g + 1.0) / 2.0; });
  add("2a-b-g=0", [g](double a, double b) { return 2.0 * a - b - g; });
  if (g > 1.0) {
    add("2a+b-g=0", [g](double a, double b) { return 2.0 * a + b - g; });
  } else {
    add("2a+b+g-2=0", [g](double a, double b) { return 2.0 * a + b + g - 2.0; });
  }
  add("4a-2b-g=0", [g](double a, double b) { return 4.0 * a - 2.0 * b - g; });
  add("2a-2b+max(1-g,0)=0", [r1](double a, double b) { return 2.0 * a - 2.0 * b + r1; });
  add("b=max(1-g/2,g/2)", [bm](double, double b) { return b - bm; });
  add("2a+b=max(g,2-g)", [gm](double a, double b) { return 2.0 * a + b - gm; });
  add("a=max(1,g)/2", [am](double a, double) { return a - am; });
  add("a=g/2", [g](double a, double) { return a - g / 2.0; });
  add("2a-2b-g+1=0", [g](double a, double b) { return 2.0 * a - 2.0 * b - g + 1.0; });
  add("b=g/2", [g](double, double b) { return b - g / 2.0; });
  add("b=1-g/2", [g](double, double b) { return b - (1.0 - g / 2.0); });
  if (g > 1.0) {
    add("b(4a-g-1)=4a^2-2ag", [g](double a, double b) {
      return b * (4.0 * a - g - 1.0) - (4.0 * a * a - 2.0 * a * g);
    });
  }
  return L;
}

// ---- presets ----

struct PresetDef {
  std::string name;
  std::string swept;
  std::string description;
  double alpha, beta, gamma, a;  // the swept one is ignored
  double lo, hi;
  std::vector<double> breakpoints;
};

const std::vector<PresetDef>& presets() {
  static const std::vector<PresetDef> defs{
      {"example-1", "alpha", "plate with damped wave, gamma=2, beta=1", 0, 1, 2, 2, 0, 1.5,
       {0, 0.5, 1, 1.5}},
      {"example-2", "alpha", "wave with damped plate, beta=gamma=1/2", 0, 0.5, 0.5, 2, 0, 0.75,
       {0, 0.75}},
      {"example-3", "beta", "plate with fractionally damped wave, gamma=2, alpha=1", 1, 0, 2, 2,
       0, 1, {0, 1}},
      {"example-4", "beta", "wave with fractionally damped plate, alpha=gamma=1/2", 0.5, 0, 0.5,
       2, 0, 1, {0, 0.5, 0.75, 1}},
      {"example-5", "beta", "two plates, gamma=1, alpha=1/2", 0.5, 0, 1, 1, 0, 1, {0, 0.5, 1}},
      {"example-6", "beta", "two plates, gamma=1, alpha=1/4", 0.25, 0, 1, 1, 0, 1,
       {0, 0.25, 0.5, 1}},
  };
  return defs;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_field(fields[i]);
  }
  os << "\r\n";
}

std::vector<std::vector<std::string>> read_csv(std::istream& is) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  char c;
  while (is.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (is.peek() == '"') {
          is.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && is.peek() == '\n') is.get(c);
      row.push_back(field);
      field.clear();
      rows.push_back(row);
      row.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw std::runtime_error("read_csv: unterminated quoted field");
  if (any) {
    row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ojson to_json(const Params& p) {
  ojson j;
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  j["gamma"] = p.gamma;
  j["a"] = p.a;
  j["b"] = p.b;
  j["k"] = p.k;
  j["in_E"] = p.in_E;
  j["same_speed"] = p.same_speed();
  return j;
}

ojson to_json(const RegularityVerdict& v) {
  ojson j;
  j["kind"] = to_string(v.kind);
  j["region"] = to_string(v.region);
  j["mu"] = v.mu;
  j["delta_inf"] = num_or_null(v.delta_inf);
  if (!v.diagnostic.empty()) j["diagnostic"] = v.diagnostic;
  return j;
}

Classification classify(const Params& p) {
  Classification c;
  c.params = p;
  c.verdict = classify_regularity(p);
  const bool domain = p.same_speed() ? in_E_tilde(p.alpha, p.beta) : in_E(p.alpha, p.beta, p.gamma);
  if (!domain) {
    c.cell_note = p.same_speed() ? "outside E~" : "outside E";
    return c;
  }
  try {
    c.cell = partition_cell(p);
  } catch (const PartitionError& e) {
    c.cell_note = e.what();
  }
  return c;
}

ojson to_json(const Classification& c) {
  ojson j;
  j["params"] = to_json(c.params);
  j["verdict"] = to_json(c.verdict);
  j["cell"] = c.cell ? ojson(to_string(*c.cell)) : ojson(nullptr);
  if (!c.cell_note.empty()) j["cell_note"] = c.cell_note;
  return j;
}

// ---- presets ----

std::vector<std::string> preset_names() {
  std::vector<std::string> n;
  for (const auto& d : presets()) n.push_back(d.name);
  return n;
}

PresetTable run_preset(const std::string& name, double step, std::optional<double> a) {
  const PresetDef* def = nullptr;
  for (const auto& d : presets())
    if (d.name == name) def = &d;
  if (!def) throw UnknownPreset("unknown preset '" + name + "' (expected example-1..example-6)");
  if (!(step > 0.0)) throw std::invalid_argument("preset step must be > 0");

  std::set<double> values(def->breakpoints.begin(), def->breakpoints.end());
  const long n = static_cast<long>(std::floor((def->hi - def->lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) values.insert(round12(def->lo + static_cast<double>(i) * step));
  values.insert(def->hi);

  PresetTable t;
  t.name = def->name;
  t.swept = def->swept;
  t.description = def->description;
  const double speed = a.value_or(def->a);
  for (double v : values) {
    if (v < def->lo || v > def->hi) continue;
    PresetRow r;
    r.value = v;
    r.breakpoint = std::find(def->breakpoints.begin(), def->breakpoints.end(), v) !=
                   def->breakpoints.end();
    const double al = def->swept == "alpha" ? v : def->alpha;
    const double be = def->swept == "beta" ? v : def->beta;
    r.params = Params::make(al, be, def->gamma, speed);
    r.verdict = classify_regularity(r.params);
    t.rows.push_back(r);
  }
  return t;
}

// ---- region maps ----

bool operator==(const RegionMapPoint& x, const RegionMapPoint& y) {
  return x.alpha == y.alpha && x.beta == y.beta && x.kind == y.kind && x.region == y.region &&
         x.mu == y.mu && x.cell == y.cell;
}

bool operator==(const RegionMap& x, const RegionMap& y) {
  return x.same_speed == y.same_speed && x.gamma == y.gamma && x.a == y.a && x.h == y.h &&
         x.n_alpha == y.n_alpha && x.n_beta == y.n_beta && x.points == y.points;
}

RegionMap scan_region_map(double gamma, bool same_speed, double h, int jobs) {
  if (!(h >= 1e-4 && h <= 0.1)) throw std::invalid_argument("scan: h must lie in [1e-4, 0.1]");
  RegionMap m;
  m.same_speed = same_speed;
  m.gamma = same_speed ? 1.0 : gamma;
  m.a = same_speed ? 1.0 : 2.0;
  m.h = h;
  if (!same_speed && !(gamma >= 0.5 && gamma <= 2.0))
    throw std::invalid_argument("scan: gamma must lie in [1/2, 2]");
  const double amax = same_speed ? 1.0 : (m.gamma + 1.0) / 2.0;
  m.n_alpha = static_cast<std::size_t>(std::floor(amax / h + 1e-9)) + 1;
  m.n_beta = static_cast<std::size_t>(std::floor(1.0 / h + 1e-9)) + 1;
  m.points.resize(m.n_alpha * m.n_beta);
  parallel_for(m.n_alpha, jobs, [&](std::size_t i) {
    for (std::size_t j = 0; j < m.n_beta; ++j) {
      RegionMapPoint& pt = m.points[i * m.n_beta + j];
      pt.alpha = round12(static_cast<double>(i) * h);
      pt.beta = round12(static_cast<double>(j) * h);
      const Params p = Params::make(pt.alpha, pt.beta, m.gamma, m.a);
      const RegularityVerdict v = classify_regularity(p);
      pt.kind = v.kind;
      pt.region = v.region;
      pt.mu = v.mu;
      try {
        pt.cell = partition_cell(p);
      } catch (const PartitionError&) {
        pt.cell.reset();
      }
    }
  });
  return m;
}

void write_region_map(std::ostream& os, const RegionMap& m) {
  write_csv_row(os, {"alpha", "beta", "gamma", "a", "h", "same_speed", "kind", "region", "mu",
                     "cell"});
  for (const auto& pt : m.points) {
    write_csv_row(os, {format_double(pt.alpha), format_double(pt.beta), format_double(m.gamma),
                       format_double(m.a), format_double(m.h), m.same_speed ? "1" : "0",
                       to_string(pt.kind), to_string(pt.region), format_double(pt.mu),
                       pt.cell ? to_string(*pt.cell) : ""});
  }
}

RegionMap read_region_map(std::istream& is) {
  const auto rows = read_csv(is);
  if (rows.empty() || rows.front().size() != 10 || rows.front()[0] != "alpha")
    throw std::runtime_error("read_region_map: missing or malformed header");
  RegionMap m;
  std::set<double> alphas, betas;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.size() != 10) throw std::runtime_error("read_region_map: row " + std::to_string(r) + " has wrong width");
    RegionMapPoint pt;
    pt.alpha = parse_double(f[0]);
    pt.beta = parse_double(f[1]);
    m.gamma = parse_double(f[2]);
    m.a = parse_double(f[3]);
    m.h = parse_double(f[4]);
    m.same_speed = f[5] == "1";
    const auto k = regularity_from_string(f[6]);
    const auto reg = region_from_string(f[7]);
    if (!k || !reg) throw std::runtime_error("read_region_map: bad verdict in row " + std::to_string(r));
    pt.kind = *k;
    pt.region = *reg;
    pt.mu = parse_double(f[8]);
    if (!f[9].empty()) {
      pt.cell = cell_from_string(f[9]);
      if (!pt.cell) throw std::runtime_error("read_region_map: bad cell '" + f[9] + "'");
    }
    alphas.insert(pt.alpha);
    betas.insert(pt.beta);
    m.points.push_back(pt);
  }
  m.n_alpha = alphas.size();
  m.n_beta = betas.size();
  if (m.n_alpha * m.n_beta != m.points.size())
    throw std::runtime_error("read_region_map: rows do not form a lattice");
  return m;
}

BoundarySummary summarize_boundaries(const RegionMap& m) {
  BoundarySummary s;
  const std::vector<NamedLine> lines = printed_lines(m.gamma, m.same_speed);
  std::vector<std::size_t> counts(lines.size(), 0);

  auto visit_edge = [&](const RegionMapPoint& x, const RegionMapPoint& y) {
    if (x.region == y.region) return;
    ++s.change_edges;
    bool explained = false;
    for (std::size_t l = 0; l < lines.size(); ++l) {
      const double fx = lines[l].f(x.alpha, x.beta), fy = lines[l].f(y.alpha, y.beta);
      if (fx * fy < 0.0 || std::abs(fx) <= 1e-12 || std::abs(fy) <= 1e-12) {
        ++counts[l];
        explained = true;
      }
    }
    if (!explained) ++s.unexplained_edges;
  };
  for (std::size_t i = 0; i < m.n_alpha; ++i)
    for (std::size_t j = 0; j < m.n_beta; ++j) {
      if (i + 1 < m.n_alpha) visit_edge(m.at(i, j), m.at(i + 1, j));
      if (j + 1 < m.n_beta) visit_edge(m.at(i, j), m.at(i, j + 1));
    }
  for (std::size_t l = 0; l < lines.size(); ++l)
    if (counts[l] > 0) s.lines.push_back({lines[l].name, counts[l]});

  // Connected patches of equal region label inside the regularity domain.
  std::vector<std::size_t> parent(m.points.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t x, std::size_t y) { parent[find(x)] = find(y); };
  // Lattice points join when they are at most a knight's move apart and the
  // midpoint has the same label; thin wedges stay in one piece at coarse h.
  const int offsets[][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {1, 2}, {2, 1}, {1, -2}, {2, -1}};
  for (std::size_t i = 0; i < m.n_alpha; ++i)
    for (std::size_t j = 0; j < m.n_beta; ++j) {
      const RegionMapPoint& x = m.at(i, j);
      if (x.region == Region::Outside) continue;
      for (const auto& o : offsets) {
        const long ii = static_cast<long>(i) + o[0], jj = static_cast<long>(j) + o[1];
        if (ii >= static_cast<long>(m.n_alpha) || jj < 0 || jj >= static_cast<long>(m.n_beta)) continue;
        const RegionMapPoint& y = m.at(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj));
        if (y.region != x.region) continue;
        const bool adjacent = std::abs(o[0]) + std::abs(o[1]) == 1;
        if (!adjacent) {
          const Params mid = Params::relaxed((x.alpha + y.alpha) / 2.0, (x.beta + y.beta) / 2.0,
                                             m.gamma, m.a);
          if (classify_regularity(mid).region != x.region) continue;
        }
        unite(i * m.n_beta + j, static_cast<std::size_t>(ii) * m.n_beta + static_cast<std::size_t>(jj));
      }
    }
  std::set<std::size_t> roots;
  for (std::size_t id = 0; id < m.points.size(); ++id) {
    if (m.points[id].region == Region::Outside) continue;
    if (roots.insert(find(id)).second) ++s.components_by_region[to_string(m.points[id].region)];
  }
  s.components = roots.size();
  return s;
}

ojson to_json(const BoundarySummary& s) {
  ojson j;
  j["change_edges"] = s.change_edges;
  j["unexplained_edges"] = s.unexplained_edges;
  j["components"] = s.components;
  ojson byr = ojson::object();
  for (const auto& [k, v] : s.components_by_region) byr[k] = v;
  j["components_by_region"] = byr;
  ojson lines = ojson::array();
  for (const auto& l : s.lines) lines.push_back({{"line", l.line}, {"crossings", l.crossings}});
  j["lines"] = lines;
  return j;
}

// ---- sweeps ----

std::vector<double> default_mu_grid() { return geometric_grid(1e2, 1e10, 161); }

void write_spectrum_csv(std::ostream& os, const SpectrumSweep& s) {
  std::vector<std::string> header{"mu"};
  for (int b = 0; b < 4; ++b) {
    header.push_back("re_" + std::to_string(b));
    header.push_back("im_" + std::to_string(b));
  }
  write_csv_row(os, header);
  for (std::size_t i = 0; i < s.mu_grid.size(); ++i) {
    std::vector<std::string> row{format_double(s.mu_grid[i])};
    for (std::size_t b = 0; b < 4; ++b) {
      row.push_back(format_double(s.branches[b][i].real()));
      row.push_back(format_double(s.branches[b][i].imag()));
    }
    write_csv_row(os, row);
  }
}

void write_resolvent_csv(std::ostream& os, const ResolventCurve& c) {
  write_csv_row(os, {"lambda", "norm", "argmax_mu", "truncated"});
  for (std::size_t i = 0; i < c.lambda_grid.size(); ++i) {
    write_csv_row(os, {format_double(c.lambda_grid[i]), format_double(c.values[i]),
                       format_double(c.argmax_mu[i]), c.truncated[i] ? "1" : "0"});
  }
}

ojson to_json(const SpectrumSweep& s) {
  ojson j;
  j["params"] = to_json(s.params);
  j["grid"] = {{"min", s.mu_grid.front()}, {"max", s.mu_grid.back()}, {"points", s.mu_grid.size()}};
  j["max_residual"] = s.max_residual;
  ojson fits = ojson::array();
  for (std::size_t b = 0; b < 4; ++b) {
    const BranchFit& f = s.fits[b];
    ojson e;
    e["branch"] = b;
    e["r"] = f.re_valid ? ojson(f.re.exponent) : ojson(nullptr);
    e["r_r2"] = f.re_valid ? ojson(f.re.r_squared) : ojson(nullptr);
    e["s"] = f.im_valid ? ojson(f.im.exponent) : ojson(nullptr);
    e["s_r2"] = f.im_valid ? ojson(f.im.r_squared) : ojson(nullptr);
    e["oscillating"] = f.oscillating;
    fits.push_back(e);
  }
  j["fits"] = fits;
  ojson w = ojson::array();
  for (const auto& x : s.warnings) w.push_back({{"kind", to_string(x.kind)}, {"message", x.message}});
  j["warnings"] = w;
  return j;
}

ojson to_json(const ResolventCurve& c) {
  ojson j;
  j["lambda"] = {{"min", c.lambda_grid.front()}, {"max", c.lambda_grid.back()},
                 {"points", c.lambda_grid.size()}};
  j["modes"] = c.mode_count_used;
  j["m"] = c.m();
  j["r_squared"] = c.fit.r_squared;
  std::size_t t = 0;
  for (bool b : c.truncated) t += b ? 1 : 0;
  j["truncated_points"] = t;
  return j;
}

// ---- verify ----

std::optional<VerifyMode> verify_mode_from_string(const std::string& s) {
  if (s == "spectrum") return VerifyMode::Spectrum;
  if (s == "resolvent") return VerifyMode::Resolvent;
  if (s == "asymptotics") return VerifyMode::Asymptotics;
  if (s == "all") return VerifyMode::All;
  return std::nullopt;
}

bool VerifyReport::failed() const {
  return std::any_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.status == "FAIL"; });
}

VerifyReport run_verify(const Params& p, VerifyMode mode, int jobs) {
  VerifyReport rep;
  rep.params = p;
  rep.verdict = classify_regularity(p);
  const bool inside = rep.verdict.kind != Regularity::NotDifferentiable;
  const double mu = rep.verdict.mu;
  const bool all = mode == VerifyMode::All;

  if (all || mode == VerifyMode::Spectrum) {
    const SpectrumSweep s = spectrum_sweep(p, default_mu_grid(), jobs);
    CheckResult c;
    c.name = "spectrum";
    c.details = to_json(s);
    try {
      const GevreyEstimate g = gevrey_exponent_estimate(s);
      c.details["mu_hat"] = g.mu_hat;
      c.details["worst_branch"] = g.worst_branch;
      c.details["not_differentiable"] = g.not_differentiable;
      if (!inside) {
        c.status = g.not_differentiable ? "PASS" : "FAIL";
      } else if (mu >= 1.0) {
        c.status = g.mu_hat >= 0.97 ? "PASS" : "FAIL";
      } else {
        c.status = std::abs(g.mu_hat - mu) <= 0.03 * mu ? "PASS" : "FAIL";
      }
    } catch (const PoorFit& e) {
      c.status = "WARN";
      c.details["warning"] = e.what();
    }
    rep.checks.push_back(c);

    CheckResult h;
    h.name = "left-half-plane";
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& br : s.branches)
      for (const auto& z : br) worst = std::max(worst, z.real() / std::max(1.0, std::abs(z)));
    h.details["max_scaled_real_part"] = worst;
    h.status = worst <= 1e-8 ? "PASS" : "FAIL";
    rep.checks.push_back(h);
  }

  if (all || mode == VerifyMode::Resolvent) {
    ResolventOptions opt;
    opt.jobs = jobs;
    const ResolventCurve curve = resolvent_sweep(p, default_lambda_grid(), opt);
    CheckResult c;
    c.name = "resolvent";
    c.details = to_json(curve);
    if (inside) {
      const CriterionReport cr = criterion_check(mu, curve);
      c.status = to_string(cr.status);
      c.details["expected_mu"] = mu;
      c.details["message"] = cr.message;
    } else {
      const DifferentiabilityReport d = differentiability_check(curve);
      c.details["log_lambda_norm_exponent"] = d.growth_exponent;
      c.details["criterion_holds"] = d.criterion_holds;
      c.status = d.criterion_holds ? "FAIL" : "PASS";
    }
    rep.checks.push_back(c);
  }

  if (all || mode == VerifyMode::Asymptotics) {
    CheckResult c;
    c.name = "asymptotics";
    const std::vector<AsymptoticBranch> br = expand_roots_resolved(p);
    const RatioLaw law = ratio_law(br);
    c.details["ratio"] = law.ratio;
    c.details["worst_branch"] = law.worst_branch;
    c.details["not_differentiable"] = law.not_differentiable;
    c.details["complete"] = law.complete;
    if (!law.complete) {
      c.status = "WARN";
    } else if (!inside) {
      c.status = law.not_differentiable ? "PASS" : "FAIL";
    } else if (mu >= 1.0) {
      c.status = law.ratio >= 0.99 ? "PASS" : "FAIL";
    } else {
      c.status = std::abs(law.ratio - mu) <= 1e-2 ? "PASS" : "FAIL";
    }
    rep.checks.push_back(c);
  }
  return rep;
}

ojson to_json(const VerifyReport& r) {
  ojson j;
  j["params"] = to_json(r.params);
  j["verdict"] = to_json(r.verdict);
  ojson checks = ojson::array();
  for (const auto& c : r.checks) {
    ojson e;
    e["name"] = c.name;
    e["status"] = c.status;
    e["details"] = c.details;
    checks.push_back(e);
  }
  j["checks"] = checks;
  j["status"] = r.failed() ? "FAIL" : "PASS";
  return j;
}

// ---- manifest ----

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string input_digest(const RunManifest& m) {
  std::ostringstream os;
  os << m.command << '\n';
  if (m.has_params) {
    os << format_double(m.params.alpha) << ',' << format_double(m.params.beta) << ','
       << format_double(m.params.gamma) << ',' << format_double(m.params.a) << ','
       << format_double(m.params.b) << ',' << format_double(m.params.k) << '\n';
  }
  for (const auto& [k, v] : m.options) os << k << '=' << v << '\n';
  return fnv1a_hex(os.str());
}

ojson to_json(const RunManifest& m) {
  ojson j;
  j["command"] = m.command;
  j["params"] = m.has_params ? to_json(m.params) : ojson(nullptr);
  ojson opts = ojson::object();
  for (const auto& [k, v] : m.options) opts[k] = v;
  j["options"] = opts;
  j["started"] = m.started;
  j["finished"] = m.finished;
  j["artifacts"] = m.artifacts;
  j["tool_version"] = kToolVersion;
  j["input_digest"] = m.input_digest;
  return j;
}

}  // namespace gevrey
