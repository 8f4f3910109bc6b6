#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gevrey/modal_spectrum.hpp"
#include "gevrey/params.hpp"
#include "gevrey/resolvent.hpp"

namespace gevrey {

using ojson = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

class UnknownPreset : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- text formats ----

// Shortest decimal that reads back to the same double.
std::string format_double(double x);

// RFC 4180: quote fields containing a comma, quote, CR or LF; double the quotes.
std::string csv_field(const std::string& s);
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);
std::vector<std::vector<std::string>> read_csv(std::istream& is);

// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

ojson to_json(const Params& p);
ojson to_json(const RegularityVerdict& v);

// ---- classify ----

struct Classification {
  Params params;
  RegularityVerdict verdict;
  std::optional<Cell> cell;
  std::string cell_note;  // why no cell was assigned
};

Classification classify(const Params& p);
ojson to_json(const Classification& c);

// ---- presets ----

struct PresetRow {
  double value{0.0};  // the swept parameter
  bool breakpoint{false};
  Params params;
  RegularityVerdict verdict;
};

struct PresetTable {
  std::string name;
  std::string swept;  // "alpha" or "beta"
  std::string description;
  std::vector<PresetRow> rows;
};

std::vector<std::string> preset_names();
// a overrides the preset's speed coefficient when given.
PresetTable run_preset(const std::string& name, double step = 0.05,
                       std::optional<double> a = std::nullopt);

// ---- region maps ----

struct RegionMapPoint {
  double alpha{0.0};
  double beta{0.0};
  Regularity kind{Regularity::NotDifferentiable};
  Region region{Region::Outside};
  double mu{0.0};
  std::optional<Cell> cell;
};

struct RegionMap {
  bool same_speed{false};
  double gamma{1.0};
  double a{2.0};
  double h{0.05};
  std::size_t n_alpha{0};
  std::size_t n_beta{0};
  std::vector<RegionMapPoint> points;  // alpha-major: index = i * n_beta + j

  const RegionMapPoint& at(std::size_t i, std::size_t j) const { return points[i * n_beta + j]; }
};

bool operator==(const RegionMapPoint& x, const RegionMapPoint& y);
bool operator==(const RegionMap& x, const RegionMap& y);

// Lattice over [0,(gamma+1)/2] x [0,1] (or [0,1]^2 with a = gamma = 1).
RegionMap scan_region_map(double gamma, bool same_speed, double h, int jobs = 1);
void write_region_map(std::ostream& os, const RegionMap& m);
RegionMap read_region_map(std::istream& is);

struct BoundaryLineReport {
  std::string line;   // printed hyperplane, e.g. "4a-2b-g=0"
  std::size_t crossings{0};  // verdict changes across lattice edges it separates
};

struct BoundarySummary {
  std::vector<BoundaryLineReport> lines;  // printed lines with at least one crossing
  std::size_t change_edges{0};
  std::size_t unexplained_edges{0};  // verdict changes no printed line accounts for
  std::size_t components{0};         // connected same-region patches inside the domain
  std::map<std::string, std::size_t> components_by_region;
};

BoundarySummary summarize_boundaries(const RegionMap& m);
ojson to_json(const BoundarySummary& s);

// ---- sweeps ----

std::vector<double> default_mu_grid();  // 161 geometric points over [1e2, 1e10]

void write_spectrum_csv(std::ostream& os, const SpectrumSweep& s);
void write_resolvent_csv(std::ostream& os, const ResolventCurve& c);
ojson to_json(const SpectrumSweep& s);
ojson to_json(const ResolventCurve& c);

// ---- verify ----

enum class VerifyMode { Spectrum, Resolvent, Asymptotics, All };
std::optional<VerifyMode> verify_mode_from_string(const std::string& s);

struct CheckResult {
  std::string name;
  std::string status;  // PASS, FAIL or WARN
  ojson details;
};

struct VerifyReport {
  Params params;
  RegularityVerdict verdict;
  std::vector<CheckResult> checks;
  bool failed() const;
};

VerifyReport run_verify(const Params& p, VerifyMode mode, int jobs = 1);
ojson to_json(const VerifyReport& r);

// ---- manifest ----

struct RunManifest {
  std::string command;
  Params params;
  bool has_params{false};
  std::map<std::string, std::string> options;
  std::string started;
  std::string finished;
  std::vector<std::string> artifacts;
  std::string input_digest;
};

std::string utc_timestamp();
// Digest of the command, params and options: identical inputs give identical ids.
std::string input_digest(const RunManifest& m);
ojson to_json(const RunManifest& m);

}  // namespace gevrey
