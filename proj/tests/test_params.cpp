#include <array>
#include <cmath>
#include <random>

#include "doctest.h"

#include "gevrey/params.hpp"

using namespace gevrey;

namespace {

// Quasi-random points on [0,1)^2 from the plastic-number Kronecker sequence.
std::pair<double, double> kronecker(std::size_t n) {
  const double g = 1.32471795724474602596;
  const double a1 = 1.0 / g, a2 = 1.0 / (g * g);
  return {std::fmod(0.5 + a1 * static_cast<double>(n), 1.0),
          std::fmod(0.5 + a2 * static_cast<double>(n), 1.0)};
}

}  // namespace

TEST_CASE("params: construction rejects bad coefficients") {
  CHECK_THROWS_AS(Params::make(0.5, 0.5, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Params::make(0.5, 0.5, 1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Params::make(0.5, 0.5, 1.0, 1.0, 1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(Params::make(1.5, 0.5, 1.0, 2.0), std::invalid_argument);
  CHECK_NOTHROW(Params::relaxed(1.5, 0.5, 1.0, 2.0));
  CHECK_FALSE(Params::relaxed(1.5, 0.5, 1.0, 2.0).in_E);
  CHECK(Params::make(0.3, 0.3, 1.0, 1.0).same_speed());
  CHECK_FALSE(Params::make(0.3, 0.3, 1.0, 2.0).same_speed());
}

TEST_CASE("params: regularity domain membership") {
  auto d = in_regularity_domain(Params::make(1, 1, 2, 2));
  CHECK(d.inside);
  CHECK(d.tag == Domain::R);

  d = in_regularity_domain(Params::make(0.25, 0.75, 1, 2));
  CHECK_FALSE(d.inside);
  CHECK(d.tag == Domain::Outside);

  d = in_regularity_domain(Params::make(1, 1, 1, 1));
  CHECK(d.inside);
  CHECK(d.tag == Domain::RTilde);
}

TEST_CASE("params: classifier examples") {
  auto v = classify_regularity(Params::make(0.75, 1, 2, 2));
  CHECK(v.kind == Regularity::Gevrey);
  CHECK(v.region == Region::R2);
  CHECK(v.mu == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(v.delta_inf == doctest::Approx(2.0).epsilon(1e-14));

  v = classify_regularity(Params::make(1.25, 1, 2, 2));
  CHECK(v.region == Region::R4);
  CHECK(v.mu == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(v.delta_inf == doctest::Approx(1.25).epsilon(1e-14));

  v = classify_regularity(Params::make(0.5, 0.25, 1, 1));
  CHECK(v.region == Region::Rt3);
  CHECK(v.mu == doctest::Approx(0.5).epsilon(1e-14));

  v = classify_regularity(Params::make(1, 1, 2, 2));
  CHECK(v.kind == Regularity::Analytic);
  CHECK(v.region == Region::R1);
  CHECK(v.mu == 1.0);

  // 4a-2b-g = 0.2 > 0: the R2 formula would give 1.4, but the point is in R1.
  v = classify_regularity(Params::make(0.6, 0.85, 0.5, 2));
  CHECK(v.kind == Regularity::Analytic);
  CHECK(v.region == Region::R1);

  v = classify_regularity(Params::make(0.5, 0.85, 0.5, 2));
  CHECK(v.region == Region::R2);
  CHECK(v.mu == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(v.delta_inf == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("params: outside inputs are verdicts, not errors") {
  const auto v = classify_regularity(Params::relaxed(1.8, 0.5, 1.0, 2.0));
  CHECK(v.kind == Regularity::NotDifferentiable);
  CHECK(v.region == Region::Outside);
  CHECK_FALSE(v.diagnostic.empty());
  CHECK(std::isinf(v.delta_inf));
}

TEST_CASE("params: isolated corners") {
  for (double g : {0.5, 0.75, 1.0}) {
    const auto v = classify_regularity(Params::make((g + 1) / 2, 1, g, 2));
    CHECK(v.region == Region::R1);
  }
  CHECK(classify_regularity(Params::make(1, 1, 1, 1)).region == Region::Rt1);
  // For gamma > 1 the upper corner is the R4 limit: beta/alpha = 2/(gamma+1).
  const auto v = classify_regularity(Params::make(1.5, 1, 2, 2));
  CHECK(v.region == Region::R4);
  CHECK(v.mu == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("params: verdict invariant under b and k") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double g = 0.5 + 1.5 * u(rng);
    const double al = u(rng) * (g + 1) / 2, be = u(rng);
    const double a = u(rng) < 0.2 ? 1.0 : 0.5 + 2 * u(rng);
    const double gg = a == 1.0 && u(rng) < 0.5 ? 1.0 : g;
    const auto base = classify_regularity(Params::relaxed(al, be, gg, a));
    for (double b : {-2.0, 1.0, 3.0})
      for (double k : {0.5, 1.0, 2.0}) {
        const auto v = classify_regularity(Params::relaxed(al, be, gg, a, b, k));
        REQUIRE(v.region == base.region);
        REQUIRE(v.mu == base.mu);
      }
  }
}

TEST_CASE("params: regions partition R(gamma) and R~") {
  const std::array<Region, 5> diff{Region::R1, Region::R2, Region::R3, Region::R4, Region::R5};
  const std::array<Region, 4> same{Region::Rt1, Region::Rt2, Region::Rt3, Region::Rt4};
  for (double g : {0.5, 0.75, 1.0, 1.5, 2.0}) {
    for (std::size_t n = 0; n < 20000; ++n) {
      const auto [x, y] = kronecker(n);
      const double al = x * (g + 1) / 2, be = y;
      const Params p = Params::make(al, be, g, 2);
      if (!in_regularity_domain(p).inside) continue;
      int hits = 0;
      for (Region r : diff) hits += region_conditions(r, al, be, g) ? 1 : 0;
      REQUIRE(hits == 1);
    }
  }
  for (std::size_t n = 0; n < 20000; ++n) {
    const auto [al, be] = kronecker(n);
    const Params p = Params::make(al, be, 1, 1);
    if (!in_regularity_domain(p).inside) continue;
    int hits = 0;
    for (Region r : same) hits += region_conditions(r, al, be, 1) ? 1 : 0;
    REQUIRE(hits == 1);
  }
}

TEST_CASE("params: mu continuous across the R1/R2 surface") {
  for (double g : {0.5, 1.0, 1.5, 2.0}) {
    const double be = std::max(1 - g / 2, g / 2) + 0.01;
    if (be > 1) continue;
    const double al = (2 * be + g) / 4;
    const double eps = 1e-9;
    const auto inside = classify_regularity(Params::make(al - eps, be, g, 2));
    CHECK(inside.region == Region::R2);
    CHECK(inside.mu == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(classify_regularity(Params::make(al, be, g, 2)).region == Region::R1);
  }
}

TEST_CASE("params: mu = 2 beta increases along R~3") {
  double prev = -1;
  for (int i = 1; i < 100; ++i) {
    const double be = 0.45 * i / 100.0;
    const auto v = classify_regularity(Params::make(0.46, be, 1, 1));
    REQUIRE(v.region == Region::Rt3);
    CHECK(v.mu > prev);
    prev = v.mu;
  }
}

TEST_CASE("partition: cell examples") {
  CHECK(partition_cell(Params::make(0.3, 0.3, 1.5, 2)) == Cell::V1);
  CHECK(partition_cell(Params::make(0.5, 0.25, 1, 2)) == Cell::L12);
  CHECK(partition_cell(Params::make(0.25, 0.25, 1, 1)) == Cell::Lt13);
  CHECK(to_string(Cell::Lt13) == "Lt13");
  CHECK(cell_from_string("Vbar5") == Cell::Vbar5);
  CHECK_FALSE(cell_from_string("V7").has_value());
}

TEST_CASE("partition: the beta = 0 edge of E~ below alpha = 1/2 has no cell") {
  CHECK_THROWS_AS(partition_cell(Params::make(0.25, 0, 1, 1)), NoCell);
}

TEST_CASE("partition: exactly one cell at quasi-random points") {
  for (double g : {0.5, 0.75, 1.0, 1.5, 2.0}) {
    const auto& cells = different_speed_cells();
    for (std::size_t n = 0; n < 5000; ++n) {
      const auto [x, y] = kronecker(n);
      const double al = x * (g + 1) / 2, be = y;
      int hits = 0;
      for (Cell c : cells) hits += cell_member(c, al, be, g) ? 1 : 0;
      REQUIRE(hits == 1);
      CHECK_NOTHROW(partition_cell(Params::make(al, be, g, 2)));
    }
  }
}

TEST_CASE("partition: snapping reaches boundary cells") {
  const Params p = snap(Params::make(0.501, 0.2, 1.0, 2.0), 0.01);
  CHECK(p.alpha == 0.5);
  CHECK(partition_cell(p) == Cell::L12);
  const Params q = snap(Params::make(0.3, 0.3, 1.0, 1.0004), 0.001);
  CHECK(q.same_speed());
}

TEST_CASE("stability orders") {
  auto s = stability_order(SRegion::S2, Params::make(0.1, 0.8, 1, 2));
  CHECK(s.kind == StabilityKind::Polynomial);
  REQUIRE(s.poly_order.has_value());
  CHECK(*s.poly_order == doctest::Approx(1.0 / 1.2).epsilon(1e-14));

  s = stability_order(SRegion::S1, Params::make(0.3, 0.4, 1.5, 2));
  CHECK(s.kind == StabilityKind::Exponential);
  CHECK_FALSE(s.poly_order.has_value());

  s = stability_order(SRegion::S4, Params::make(0.9, 0.2, 1, 1));
  CHECK(s.kind == StabilityKind::Polynomial);
  REQUIRE(s.poly_order.has_value());
  CHECK(*s.poly_order == doctest::Approx(0.1 / 0.6).epsilon(1e-14));

  CHECK_THROWS_AS(stability_order(SRegion::S2, Params::make(0.5, 0.8, 1, 2)), NonPositiveOrder);
}
