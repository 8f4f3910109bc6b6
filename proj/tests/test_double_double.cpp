#include <random>

#include "doctest.h"

#include "gevrey/double_double.hpp"

using namespace gevrey;

namespace {

using quad = __float128;

quad q(const dd& x) { return static_cast<quad>(x.hi) + static_cast<quad>(x.lo); }

double rel(quad got, quad want) {
  const quad d = got - want;
  const quad scale = want < 0 ? -want : want;
  return static_cast<double>((d < 0 ? -d : d) / (scale > 0 ? scale : 1));
}

}  // namespace

TEST_CASE("double-double: error-free transformations are exact") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> e(-30, 30);
  for (int i = 0; i < 10000; ++i) {
    const double a = std::ldexp(u(rng), e(rng)), b = std::ldexp(u(rng), e(rng));
    const dd s = ddops::two_sum(a, b);
    CHECK(q(s) == static_cast<quad>(a) + static_cast<quad>(b));
    const dd p = ddops::two_prod(a, b);
    CHECK(q(p) == static_cast<quad>(a) * static_cast<quad>(b));
  }
}

TEST_CASE("double-double: arithmetic carries about 100 bits") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int i = 0; i < 10000; ++i) {
    const dd x(u(rng), u(rng) * 1e-17), y(u(rng), u(rng) * 1e-17);
    const quad qx = q(x), qy = q(y);
    CHECK(rel(q(x + y), qx + qy) < 1e-30);
    CHECK(rel(q(x - y), qx - qy) < 1e-30 * static_cast<double>((qx + qy) / (qx > qy ? qx - qy : qy - qx)));
    CHECK(rel(q(x * y), qx * qy) < 1e-30);
    CHECK(rel(q(x / y), qx / qy) < 1e-30);
    const dd r = sqrt(x);
    CHECK(rel(q(r) * q(r), qx) < 1e-30);
  }
}

TEST_CASE("double-double: recovers a cancellation double loses") {
  const dd big(1e16);
  const dd sum = big + dd(1.0) - big;
  CHECK(sum.to_double() == 1.0);
  CHECK((1e16 + 1.0) - 1e16 != 1.0);
}

TEST_CASE("double-double: complex division") {
  const cdd a(std::complex<double>(3.0, -4.0)), b(std::complex<double>(1e200, 2e200));
  const auto z = (a / b).to_complex();
  const auto want = std::complex<double>(3.0, -4.0) / std::complex<double>(1e200, 2e200);
  CHECK(std::abs(z - want) / std::abs(want) < 1e-15);
}
