#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"

#include "gevrey/report.hpp"

using namespace gevrey;

namespace {

bool has_line(const BoundarySummary& s, const std::string& name) {
  return std::any_of(s.lines.begin(), s.lines.end(),
                     [&](const BoundaryLineReport& l) { return l.line == name && l.crossings > 0; });
}

const PresetRow& row_at(const PresetTable& t, double v) {
  for (const auto& r : t.rows)
    if (std::abs(r.value - v) < 1e-12) return r;
  throw std::runtime_error("no row");
}

}  // namespace

TEST_CASE("format: shortest round-trip doubles") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("csv: quoting follows RFC 4180") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  std::ostringstream os;
  write_csv_row(os, {"x", "a,b", "line\nbreak", "q\"uote", ""});
  write_csv_row(os, {"1", "2", "3", "4", "5"});
  CHECK(os.str().find("\r\n") != std::string::npos);
  std::istringstream is(os.str());
  const auto rows = read_csv(is);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"x", "a,b", "line\nbreak", "q\"uote", ""});
  CHECK(rows[1][4] == "5");
  std::istringstream bad("\"open,field\r\n");
  CHECK_THROWS(read_csv(bad));
}

TEST_CASE("fnv1a: reference vectors") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("classify: record contents") {
  const auto c = classify(Params::make(0.5, 0.85, 0.5, 2));
  const ojson j = to_json(c);
  CHECK(j["verdict"]["kind"] == "Gevrey");
  CHECK(j["verdict"]["region"] == "R2");
  CHECK(j["verdict"]["mu"].get<double>() == doctest::Approx(0.6));
  CHECK(j["cell"].is_string());
  const auto out = classify(Params::relaxed(1.9, 0.5, 1.0, 2.0));
  CHECK(to_json(out)["verdict"]["delta_inf"].is_null());
  CHECK_FALSE(out.cell.has_value());
}

TEST_CASE("presets: examples") {
  CHECK(preset_names().size() == 6);
  CHECK_THROWS_AS(run_preset("example-7"), UnknownPreset);

  const auto e1 = run_preset("example-1");
  CHECK(e1.swept == "alpha");
  CHECK(row_at(e1, 0.5).verdict.kind == Regularity::NotDifferentiable);
  CHECK(row_at(e1, 0.5).breakpoint);
  CHECK(row_at(e1, 1.0).verdict.kind == Regularity::Analytic);
  CHECK(e1.rows.front().value == 0.0);
  CHECK(e1.rows.back().value == 1.5);

  const auto e4 = run_preset("example-4");
  CHECK(row_at(e4, 0.75).verdict.kind == Regularity::Analytic);

  const auto e6 = run_preset("example-6", 0.05, 2.0);
  for (const auto& r : e6.rows) CHECK(r.verdict.kind == Regularity::NotDifferentiable);

  const auto fine = run_preset("example-5", 0.3);
  CHECK(fine.rows.size() == 6);  // 0, 0.3, 0.5, 0.6, 0.9, 1
}

TEST_CASE("scan: lattice covers the slice") {
  const auto m = scan_region_map(1.5, false, 0.05);
  CHECK(m.n_alpha == 26);
  CHECK(m.n_beta == 21);
  CHECK(m.points.size() == 26 * 21);
  CHECK(m.at(25, 20).alpha == doctest::Approx(1.25));
  CHECK(m.at(25, 20).beta == doctest::Approx(1.0));
  const auto s = scan_region_map(1.0, true, 0.1);
  CHECK(s.n_alpha == 11);
  CHECK(s.n_beta == 11);
  CHECK(s.a == 1.0);
  CHECK_THROWS_AS(scan_region_map(1.0, false, 0.2), std::invalid_argument);
}

TEST_CASE("scan: boundary examples") {
  const auto b15 = summarize_boundaries(scan_region_map(1.5, false, 0.01, 4));
  CHECK(has_line(b15, "4a-2b-g=0"));
  CHECK(b15.unexplained_edges == 0);

  const auto bs = summarize_boundaries(scan_region_map(1.0, true, 0.01, 4));
  CHECK(has_line(bs, "2a-b=1/2"));
  CHECK(bs.unexplained_edges == 0);

  const auto b2 = summarize_boundaries(scan_region_map(2.0, false, 0.05));
  CHECK(b2.components == 5);
  for (const char* r : {"R1", "R2", "R3", "R4", "R5"}) CHECK(b2.components_by_region.at(r) == 1);
}

TEST_CASE("region map: CSV round trip") {
  for (bool same : {false, true}) {
    const auto m = scan_region_map(0.75, same, 0.05);
    std::ostringstream os;
    write_region_map(os, m);
    std::istringstream is(os.str());
    const auto back = read_region_map(is);
    CHECK(back == m);
    std::ostringstream again;
    write_region_map(again, back);
    CHECK(again.str() == os.str());
  }
  std::istringstream bad("alpha,beta\r\n1,2\r\n");
  CHECK_THROWS(read_region_map(bad));
}

TEST_CASE("sweeps: CSV layout") {
  const Params p = Params::make(0.75, 1, 2, 2);
  const auto s = spectrum_sweep(p, geometric_grid(1e2, 1e4, 9));
  std::ostringstream os;
  write_spectrum_csv(os, s);
  std::istringstream is(os.str());
  const auto rows = read_csv(is);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0].size() == 9);
  CHECK(rows[0][0] == "mu");
  CHECK(std::stod(rows[9][0]) == s.mu_grid.back());
}

TEST_CASE("verify: pipeline on sample points") {
  auto rep = run_verify(Params::make(0.4, 0.4, 1, 1), VerifyMode::All, 4);
  CHECK_FALSE(rep.failed());
  REQUIRE(rep.checks.size() == 4);
  for (const auto& c : rep.checks) CHECK(c.status == "PASS");

  // beta = 0.5 lies above the R4/R5 curve (0.4909 at alpha = 0.9), so this is R4.
  rep = run_verify(Params::make(0.9, 0.5, 1.5, 2), VerifyMode::Resolvent, 4);
  CHECK(rep.verdict.region == Region::R4);
  CHECK(rep.verdict.mu == doctest::Approx(0.5 / 0.9));
  CHECK(rep.checks.at(0).status == "PASS");

  rep = run_verify(Params::make(0.9, 0.45, 1.5, 2), VerifyMode::Resolvent, 4);
  CHECK(rep.verdict.region == Region::R5);
  CHECK(rep.verdict.mu == doctest::Approx(0.3 / 0.7));
  CHECK(rep.checks.at(0).status == "PASS");

  rep = run_verify(Params::make(0.25, 0.75, 1, 2), VerifyMode::Spectrum, 4);
  CHECK(rep.checks.at(0).status == "PASS");
  CHECK(rep.checks.at(0).details["not_differentiable"] == true);

  CHECK(verify_mode_from_string("all") == VerifyMode::All);
  CHECK_FALSE(verify_mode_from_string("everything").has_value());
}

TEST_CASE("manifest: digest depends on inputs only") {
  RunManifest a;
  a.command = "classify";
  a.params = Params::make(0.5, 0.5, 1, 2);
  a.has_params = true;
  a.options["format"] = "json";
  RunManifest b = a;
  b.started = "2000-01-01T00:00:00Z";
  b.artifacts.push_back("report_x.json");
  CHECK(input_digest(a) == input_digest(b));
  b.options["format"] = "csv";
  CHECK(input_digest(a) != input_digest(b));
  const ojson j = to_json(a);
  CHECK(j["tool_version"] == kToolVersion);
  const std::string ts = utc_timestamp();
  CHECK(ts.size() == 20);
  CHECK(ts.back() == 'Z');
}
