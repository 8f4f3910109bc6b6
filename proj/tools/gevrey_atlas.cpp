#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "gevrey/asymptotics.hpp"
#include "gevrey/report.hpp"

namespace fs = std::filesystem;
using namespace gevrey;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  double alpha{0.0}, beta{0.0}, gamma{1.0}, a{1.0}, b{1.0}, k{1.0};
  std::string out;
  std::string format{"json"};
  double snap_eps{0.0};
  int jobs{1};
  std::uint64_t seed{1};
  CLI::Option* alpha_opt{nullptr};
  CLI::Option* beta_opt{nullptr};
  CLI::Option* gamma_opt{nullptr};
  CLI::Option* a_opt{nullptr};
};

void add_common(CLI::App* sub, Common& c, bool with_params) {
  if (with_params) {
    c.alpha_opt = sub->add_option("--alpha", c.alpha, "coupling order");
    c.beta_opt = sub->add_option("--beta", c.beta, "damping order");
    c.gamma_opt = sub->add_option("--gamma", c.gamma, "order of the undamped equation");
    c.a_opt = sub->add_option("--a", c.a, "speed coefficient (> 0)");
    sub->add_option("--b", c.b, "coupling strength, nonzero (default 1)");
    sub->add_option("--k", c.k, "damping strength (default 1)");
    sub->add_option("--snap", c.snap_eps, "snap onto boundaries within EPS");
  }
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "random seed");
}

void require(CLI::Option* o, const char* name) {
  if (o && o->count() == 0) throw UsageError(std::string("missing required option --") + name);
}

Params params_of(const Common& c) {
  require(c.alpha_opt, "alpha");
  require(c.beta_opt, "beta");
  require(c.gamma_opt, "gamma");
  require(c.a_opt, "a");
  if (!(c.gamma >= 0.5 && c.gamma <= 2.0)) throw UsageError("--gamma must lie in [0.5, 2]");
  if (!(c.a > 0.0) || !(c.k > 0.0)) throw UsageError("--a and --k must be > 0");
  if (c.b == 0.0) throw UsageError("--b must be nonzero");
  if (!std::isfinite(c.alpha) || !std::isfinite(c.beta)) throw UsageError("non-finite exponent");
  Params p = Params::relaxed(c.alpha, c.beta, c.gamma, c.a, c.b, c.k);
  if (c.snap_eps > 0.0) p = snap(p, c.snap_eps);
  return p;
}

int effective_jobs(const Common& c) {
  if (const char* env = std::getenv("GEVREY_ATLAS_JOBS")) {
    try {
      const int j = std::stoi(env);
      if (j > 0) return j;
    } catch (const std::exception&) {
    }
    throw UsageError("GEVREY_ATLAS_JOBS must be a positive integer");
  }
  return c.jobs;
}

// Collects artifacts and writes manifest.json at the end of a run.
class Run {
 public:
  Run(std::string command, const Common& c) : c_(c) {
    m_.command = std::move(command);
    m_.started = utc_timestamp();
  }

  void set_params(const Params& p) {
    m_.params = p;
    m_.has_params = true;
  }
  void option(const std::string& k, const std::string& v) { m_.options[k] = v; }
  std::string id() const { return input_digest(m_).substr(0, 12); }
  bool writing() const { return !c_.out.empty(); }

  void write(const std::string& name, const std::string& content) {
    fs::create_directories(c_.out);
    const fs::path path = fs::path(c_.out) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
    m_.artifacts.push_back(name);
  }

  void finish() {
    if (!writing()) return;
    m_.finished = utc_timestamp();
    m_.input_digest = input_digest(m_);
    std::ofstream f(fs::path(c_.out) / "manifest.json", std::ios::binary);
    f << to_json(m_).dump(2) << '\n';
  }

 private:
  const Common& c_;
  RunManifest m_;
};

void record_common(Run& run, const Common& c) {
  run.option("format", c.format);
  run.option("seed", std::to_string(c.seed));
  if (c.snap_eps > 0.0) run.option("snap", format_double(c.snap_eps));
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

// ---- subcommands ----

int cmd_classify(const Common& c, const std::string& stability) {
  const Params p = params_of(c);
  Run run("classify", c);
  run.set_params(p);
  record_common(run, c);
  const Classification cl = classify(p);
  ojson j = to_json(cl);
  if (!stability.empty()) {
    const auto s = sregion_from_string(stability);
    if (!s) throw UsageError("unknown stability region '" + stability + "'");
    run.option("stability", stability);
    const StabilityInfo info = stability_order(*s, p);
    const char* kinds[] = {"Exponential", "Polynomial", "Strong"};
    j["stability"] = {{"region", to_string(info.s_region)},
                      {"kind", kinds[static_cast<int>(info.kind)]},
                      {"order", info.poly_order ? ojson(*info.poly_order) : ojson(nullptr)}};
  }
  if (c.format == "json") {
    std::cout << dump(j);
  } else {
    const auto& v = cl.verdict;
    std::cout << "kind: " << to_string(v.kind) << "\nregion: " << to_string(v.region)
              << "\nmu: " << format_double(v.mu) << "\ndelta_inf: " << format_double(v.delta_inf)
              << "\ncell: " << (cl.cell ? to_string(*cl.cell) : "none") << '\n';
  }
  if (run.writing()) run.write("report_" + run.id() + ".json", dump(j));
  run.finish();
  return 0;
}

int cmd_preset(const Common& c, const std::string& name, double step, std::optional<double> a) {
  Run run("preset", c);
  run.option("name", name);
  run.option("step", format_double(step));
  if (a) run.option("a", format_double(*a));
  record_common(run, c);
  const PresetTable t = run_preset(name, step, a);
  std::ostringstream csv;
  write_csv_row(csv, {t.swept, "breakpoint", "alpha", "beta", "gamma", "a", "kind", "region", "mu",
                      "delta_inf"});
  ojson rows = ojson::array();
  for (const auto& r : t.rows) {
    write_csv_row(csv, {format_double(r.value), r.breakpoint ? "1" : "0",
                        format_double(r.params.alpha), format_double(r.params.beta),
                        format_double(r.params.gamma), format_double(r.params.a),
                        to_string(r.verdict.kind), to_string(r.verdict.region),
                        format_double(r.verdict.mu), format_double(r.verdict.delta_inf)});
    ojson e;
    e[t.swept] = r.value;
    e["breakpoint"] = r.breakpoint;
    e["verdict"] = to_json(r.verdict);
    rows.push_back(e);
  }
  ojson j{{"preset", t.name}, {"description", t.description}, {"swept", t.swept}, {"rows", rows}};
  std::cout << (c.format == "csv" ? csv.str() : dump(j));
  if (run.writing()) {
    if (c.format == "csv")
      run.write("sweep_" + run.id() + ".csv", csv.str());
    else
      run.write("report_" + run.id() + ".json", dump(j));
  }
  run.finish();
  return 0;
}

int cmd_scan(const Common& c, double gamma, bool same_speed, double h) {
  if (!(h >= 1e-4 && h <= 0.1)) throw UsageError("--h must lie in [1e-4, 0.1]");
  if (!same_speed && !(gamma >= 0.5 && gamma <= 2.0)) throw UsageError("--gamma must lie in [0.5, 2]");
  Run run("scan", c);
  run.option("gamma", same_speed ? "same-speed" : format_double(gamma));
  run.option("h", format_double(h));
  record_common(run, c);
  const RegionMap m = scan_region_map(gamma, same_speed, h, effective_jobs(c));
  const BoundarySummary s = summarize_boundaries(m);
  ojson j{{"gamma", m.gamma}, {"same_speed", m.same_speed}, {"a", m.a}, {"h", m.h},
          {"lattice", {{"alpha", m.n_alpha}, {"beta", m.n_beta}}}, {"summary", to_json(s)}};
  std::cout << dump(j);
  if (run.writing()) {
    std::ostringstream csv;
    write_region_map(csv, m);
    run.write("regionmap_" + (same_speed ? std::string("same") : format_double(gamma)) + ".csv",
              csv.str());
    run.write("report_" + run.id() + ".json", dump(j));
  }
  run.finish();
  return 0;
}

int cmd_verify(const Common& c, const std::string& mode_name) {
  const auto mode = verify_mode_from_string(mode_name);
  if (!mode) throw UsageError("--mode must be spectrum, resolvent, asymptotics or all");
  const Params p = params_of(c);
  Run run("verify", c);
  run.set_params(p);
  run.option("mode", mode_name);
  record_common(run, c);
  const VerifyReport rep = run_verify(p, *mode, effective_jobs(c));
  const ojson j = to_json(rep);
  if (c.format == "json") {
    std::cout << dump(j);
  } else {
    for (const auto& ch : rep.checks) std::cout << ch.name << ": " << ch.status << '\n';
  }
  if (run.writing()) run.write("report_" + run.id() + ".json", dump(j));
  run.finish();
  return rep.failed() ? 1 : 0;
}

int cmd_spectrum(const Common& c, double lo, double hi, std::size_t points) {
  if (!(lo > 0.0 && hi > lo) || points < 2) throw UsageError("need 0 < --mu-min < --mu-max and --points >= 2");
  const Params p = params_of(c);
  Run run("spectrum", c);
  run.set_params(p);
  run.option("mu_min", format_double(lo));
  run.option("mu_max", format_double(hi));
  run.option("points", std::to_string(points));
  record_common(run, c);
  const SpectrumSweep s = spectrum_sweep(p, geometric_grid(lo, hi, points), effective_jobs(c));
  ojson j = to_json(s);
  try {
    const GevreyEstimate g = gevrey_exponent_estimate(s);
    j["mu_hat"] = g.mu_hat;
    j["not_differentiable"] = g.not_differentiable;
    j["worst_branch"] = g.worst_branch;
  } catch (const PoorFit& e) {
    j["mu_hat"] = nullptr;
    j["fit_warning"] = e.what();
  }
  j["classifier"] = to_json(classify_regularity(p));
  std::ostringstream csv;
  write_spectrum_csv(csv, s);
  std::cout << (c.format == "csv" ? csv.str() : dump(j));
  if (run.writing()) {
    run.write("sweep_" + run.id() + ".csv", csv.str());
    run.write("report_" + run.id() + ".json", dump(j));
  }
  run.finish();
  return 0;
}

int cmd_resolvent(const Common& c, double lo, double hi, std::size_t points, std::size_t n_max,
                  const std::string& model_name) {
  if (!(lo > 0.0 && hi > lo) || points < 2)
    throw UsageError("need 0 < --lambda-min < --lambda-max and --points >= 2");
  const Params p = params_of(c);
  ResolventOptions opt;
  if (!model_name.empty()) {
    const auto m = model_from_string(model_name);
    if (!m) throw UsageError("unknown spectral model '" + model_name + "'");
    opt.model = *m;
  }
  if (n_max > 0) opt.n_max = n_max;
  opt.jobs = effective_jobs(c);
  Run run("resolvent", c);
  run.set_params(p);
  run.option("lambda_min", format_double(lo));
  run.option("lambda_max", format_double(hi));
  run.option("points", std::to_string(points));
  run.option("n_max", std::to_string(opt.n_max));
  run.option("model", opt.model.name());
  record_common(run, c);
  const ResolventCurve curve = resolvent_sweep(p, geometric_grid(lo, hi, points), opt);
  ojson j = to_json(curve);
  const RegularityVerdict v = classify_regularity(p);
  j["classifier"] = to_json(v);
  if (v.kind != Regularity::NotDifferentiable) {
    const CriterionReport r = criterion_check(v.mu, curve);
    j["criterion"] = {{"status", to_string(r.status)}, {"message", r.message}};
  } else {
    const DifferentiabilityReport d = differentiability_check(curve);
    j["differentiability"] = {{"criterion_holds", d.criterion_holds},
                              {"growth_exponent", d.growth_exponent}};
  }
  std::ostringstream csv;
  write_resolvent_csv(csv, curve);
  std::cout << (c.format == "csv" ? csv.str() : dump(j));
  if (run.writing()) {
    run.write("sweep_" + run.id() + ".csv", csv.str());
    run.write("report_" + run.id() + ".json", dump(j));
  }
  run.finish();
  return 0;
}

ojson branch_json(const AsymptoticBranch& b) {
  ojson terms = ojson::array();
  for (const auto& t : b.terms)
    terms.push_back({{"re", t.coeff.real()}, {"im", t.coeff.imag()}, {"power", t.value}});
  auto opt = [](const std::optional<double>& x) { return x ? ojson(*x) : ojson(nullptr); };
  return {{"terms", terms},
          {"leading_power", b.leading_power},
          {"real_part_power", opt(b.real_part_power)},
          {"imag_part_power", opt(b.imag_part_power)},
          {"degenerate", b.degenerate},
          {"complete", b.complete}};
}

int cmd_asymptotics(const Common& c, const std::string& cell_name, int samples) {
  Run run("asymptotics", c);
  record_common(run, c);
  ojson j;
  if (!cell_name.empty()) {
    const auto cell = cell_from_string(cell_name);
    if (!cell) throw UsageError("unknown cell '" + cell_name + "'");
    if (samples < 1) throw UsageError("--samples must be >= 1");
    run.option("cell", cell_name);
    run.option("samples", std::to_string(samples));
    run.option("gamma", format_double(c.gamma));
    try {
      const CellScanReport r = cell_uniformity_scan(*cell, samples, c.gamma, c.seed, effective_jobs(c));
      j = {{"cell", cell_name}, {"gamma", r.gamma}, {"a", r.a}, {"samples", r.samples},
           {"uniform", true}, {"signature", r.signature}};
    } catch (const SignatureMismatch& e) {
      j = {{"cell", cell_name}, {"uniform", false}, {"message", e.what()},
           {"first", to_json(e.first())}, {"second", to_json(e.second())}};
    }
  } else {
    const Params p = params_of(c);
    run.set_params(p);
    const auto br = expand_roots_resolved(p);
    const RatioLaw law = ratio_law(br);
    ojson arr = ojson::array();
    for (const auto& b : br) arr.push_back(branch_json(b));
    j = {{"params", to_json(p)},
         {"branches", arr},
         {"ratio_law", {{"ratio", law.ratio}, {"not_differentiable", law.not_differentiable},
                        {"complete", law.complete}}},
         {"classifier", to_json(classify_regularity(p))}};
  }
  std::cout << dump(j);
  if (run.writing()) run.write("report_" + run.id() + ".json", dump(j));
  run.finish();
  return j.contains("uniform") && !j["uniform"].get<bool>() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularity atlas for abstract coupled damped systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  // One option block per subcommand so required-option checks see their own flags.
  Common cc, pc, sc, vc, spc, rc, ac;
  std::string stability;
  auto* classify_cmd = app.add_subcommand("classify", "verdict, region and cell of one point");
  add_common(classify_cmd, cc, true);
  classify_cmd->add_option("--stability", stability, "also report the stability order in S1..St2");

  std::string preset_name;
  double step = 0.05;
  double preset_a = 0.0;
  auto* preset_cmd = app.add_subcommand("preset", "verdict table of a worked example");
  add_common(preset_cmd, pc, false);
  preset_cmd->add_option("name", preset_name, "example-1 .. example-6")->required();
  preset_cmd->add_option("--step", step, "sweep step")->check(CLI::PositiveNumber);
  auto* preset_a_opt = preset_cmd->add_option("--a", preset_a, "override the speed coefficient");

  double scan_gamma = 1.0, h = 0.05;
  bool same_speed = false;
  auto* scan_cmd = app.add_subcommand("scan", "region map of a gamma slice");
  scan_cmd->set_help_flag("--help", "print this help message and exit");
  add_common(scan_cmd, sc, false);
  auto* g_opt = scan_cmd->add_option("--gamma", scan_gamma, "gamma slice");
  auto* ss_opt = scan_cmd->add_flag("--same-speed", same_speed, "a = gamma = 1 map");
  g_opt->excludes(ss_opt);
  scan_cmd->add_option("--h", h, "lattice spacing in [1e-4, 0.1]");

  std::string mode = "all";
  auto* verify_cmd = app.add_subcommand("verify", "numerical checks against the classifier");
  add_common(verify_cmd, vc, true);
  verify_cmd->add_option("--mode", mode, "spectrum, resolvent, asymptotics or all");

  double mu_lo = 1e2, mu_hi = 1e10;
  std::size_t mu_points = 161;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "root branches over a geometric mu grid");
  add_common(spectrum_cmd, spc, true);
  spectrum_cmd->add_option("--mu-min", mu_lo);
  spectrum_cmd->add_option("--mu-max", mu_hi);
  spectrum_cmd->add_option("--points", mu_points);

  double l_lo = 1e3, l_hi = 1e9;
  std::size_t l_points = 25, n_max = 0;
  std::string model;
  auto* resolvent_cmd = app.add_subcommand("resolvent", "resolvent norm along the imaginary axis");
  add_common(resolvent_cmd, rc, true);
  resolvent_cmd->add_option("--lambda-min", l_lo);
  resolvent_cmd->add_option("--lambda-max", l_hi);
  resolvent_cmd->add_option("--points", l_points);
  resolvent_cmd->add_option("--n-max", n_max, "number of modes");
  resolvent_cmd->add_option("--model", model, "linear, dirichlet-1d, bilaplacian-1d or geometric");

  std::string cell;
  int samples = 200;
  auto* asym_cmd = app.add_subcommand("asymptotics", "root expansions or a cell uniformity scan");
  add_common(asym_cmd, ac, true);
  asym_cmd->add_option("--cell", cell, "scan this partition cell instead of one point");
  asym_cmd->add_option("--samples", samples, "cell scan sample count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*classify_cmd) return cmd_classify(cc, stability);
    if (*preset_cmd)
      return cmd_preset(pc, preset_name, step,
                        preset_a_opt->count() ? std::optional<double>(preset_a) : std::nullopt);
    if (*scan_cmd) {
      if (!same_speed && g_opt->count() == 0) throw UsageError("scan needs --gamma or --same-speed");
      return cmd_scan(sc, scan_gamma, same_speed, h);
    }
    if (*verify_cmd) return cmd_verify(vc, mode);
    if (*spectrum_cmd) return cmd_spectrum(spc, mu_lo, mu_hi, mu_points);
    if (*resolvent_cmd) return cmd_resolvent(rc, l_lo, l_hi, l_points, n_max, model);
    if (*asym_cmd) return cmd_asymptotics(ac, cell, samples);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const UnknownPreset& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
