#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gevrey {

// (alpha, beta, gamma): orders of coupling, damping and the indirectly damped
// equation; a: speed coefficient; b: coupling strength; k: damping strength.
struct Params {
  double alpha{0.0};
  double beta{0.0};
  double gamma{1.0};
  double a{1.0};
  double b{1.0};
  double k{1.0};
  bool in_E{true};

  // Throws std::invalid_argument unless (alpha, beta, gamma) lies in E.
  static Params make(double alpha, double beta, double gamma, double a, double b = 1.0,
                     double k = 1.0);
  // Accepts exponents outside E and records that in in_E.
  static Params relaxed(double alpha, double beta, double gamma, double a, double b = 1.0,
                        double k = 1.0);

  bool same_speed() const { return a == 1.0 && gamma == 1.0; }
};

bool in_E(double alpha, double beta, double gamma);
bool in_E_tilde(double alpha, double beta);

enum class Domain { R, RTilde, Outside };

struct DomainMembership {
  bool inside{false};
  Domain tag{Domain::Outside};
};

enum class Region { R1, R2, R3, R4, R5, Rt1, Rt2, Rt3, Rt4, Outside };

enum class Regularity { Analytic, Gevrey, NotDifferentiable };

struct RegularityVerdict {
  Regularity kind{Regularity::NotDifferentiable};
  double mu{0.0};
  double delta_inf{0.0};
  Region region{Region::Outside};
  std::string diagnostic;
};

class AmbiguousBoundary : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

DomainMembership in_regularity_domain(const Params& p);

// Literal membership of the (alpha, beta, gamma) inequalities for one subregion.
// Membership in R(gamma) (or R~) is not implied and must be checked separately.
bool region_conditions(Region r, double alpha, double beta, double gamma);

RegularityVerdict classify_regularity(const Params& p);

std::string to_string(Domain d);
std::string to_string(Region r);
std::string to_string(Regularity k);

// ---- eigenvalue-partition cells ----

enum class Cell {
  V1, V2, V3, V4, V5, V6,
  F12, F13, F24, F34, F35, F46, F56,
  L1234, L3456,
  F1, L12, L15, L26, P1256,
  Vbar1, Vbar2, Vbar3, Vbar4, Vbar5, Vbar6,
  Fbar12, Fbar13, Fbar24, Fbar34, Fbar35, Fbar46, Fbar56,
  Lbar1234, Lbar3456,
  Ft1, Ft2, Ft3, Ft4, Ft5,
  Lt13, Lt12, Lt35, Lt24, Lt45,
  Pt12345
};

class PartitionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoCell : public PartitionError {
 public:
  using PartitionError::PartitionError;
};

class CellOverlap : public PartitionError {
 public:
  using PartitionError::PartitionError;
};

const std::vector<Cell>& different_speed_cells();
const std::vector<Cell>& same_speed_cells();

// Printed inequalities of one cell. gamma is ignored for the same-speed cells.
bool cell_member(Cell c, double alpha, double beta, double gamma);

Cell partition_cell(const Params& p);

std::string to_string(Cell c);
std::optional<Cell> cell_from_string(const std::string& s);

// ---- stability orders ----

enum class SRegion { S1, S2, S3, S4, S5, St1, St2 };
enum class StabilityKind { Exponential, Polynomial, Strong };

struct StabilityInfo {
  SRegion s_region{SRegion::S1};
  StabilityKind kind{StabilityKind::Exponential};
  std::optional<double> poly_order;
};

class NonPositiveOrder : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

StabilityInfo stability_order(SRegion s, const Params& p);

std::string to_string(SRegion s);
std::optional<SRegion> sregion_from_string(const std::string& s);

// Distance in the (alpha, beta) plane from the nearest printed boundary line of
// the gamma slice, ignoring lines that pass through the point itself.
double boundary_margin(double alpha, double beta, double gamma);

// Moves alpha, beta, gamma (and a towards 1) onto any boundary within eps.
Params snap(const Params& p, double eps);

}  // namespace gevrey
