#include <doctest.h>

#include <cmath>

#include "contactwave/fd.hpp"

using cw::Array;

namespace {
Array nodes(int n, double lo, double hi) { return Array::LinSpaced(n, lo, hi); }
}  // namespace

TEST_CASE("d1 is exact on quadratics including the boundary closure") {
  const int n = 65;
  const Array x = nodes(n, -2.0, 3.0);
  const double dx = x(1) - x(0);
  const Array f = 2.0 * x.square() - 3.0 * x + 1.0;
  const Array g = cw::d1(f, dx);
  const Array exact = 4.0 * x - 3.0;
  CHECK(cw::sup_abs(g - exact) < 1e-11);
}

TEST_CASE("d2 is exact on cubics") {
  const int n = 65;
  const Array x = nodes(n, -1.0, 1.0);
  const double dx = x(1) - x(0);
  const Array f = x.cube() - x.square();
  const Array g = cw::d2(f, dx);
  const Array exact = 6.0 * x - 2.0;
  CHECK(cw::sup_abs(g - exact) < 1e-10);
}

TEST_CASE("d3 is exact on quartics") {
  const int n = 65;
  const Array x = nodes(n, -1.0, 2.0);
  const double dx = x(1) - x(0);
  const Array f = x.pow(4) + 2.0 * x.cube();
  const Array g = cw::d3(f, dx);
  const Array exact = 24.0 * x + 12.0;
  CHECK(cw::sup_abs(g - exact) < 1e-8);
}

TEST_CASE("derivatives converge at second order on a smooth function") {
  auto err = [](int n, int order) {
    const Array x = nodes(n, -3.0, 3.0);
    const double dx = x(1) - x(0);
    const Array f = x.sin();
    Array g, exact;
    if (order == 1) {
      g = cw::d1(f, dx);
      exact = x.cos();
    } else if (order == 2) {
      g = cw::d2(f, dx);
      exact = -x.sin();
    } else {
      g = cw::d3(f, dx);
      exact = -x.cos();
    }
    return cw::sup_abs(g - exact);
  };
  for (int order : {1, 2, 3}) {
    const double e1 = err(129, order);
    const double e2 = err(257, order);
    const double rate = std::log2(e1 / e2);
    CHECK(rate > 1.8);
  }
}

TEST_CASE("trapezoid integrates linear functions exactly and converges otherwise") {
  const int n = 101;
  const Array x = nodes(n, 0.0, 2.0);
  const double dx = x(1) - x(0);
  CHECK(cw::trapezoid(3.0 * x + 1.0, dx) == doctest::Approx(8.0).epsilon(1e-13));
  const double s1 = cw::trapezoid(nodes(101, 0.0, M_PI).sin(), M_PI / 100.0);
  const double s2 = cw::trapezoid(nodes(201, 0.0, M_PI).sin(), M_PI / 200.0);
  CHECK(std::abs(s2 - 2.0) < std::abs(s1 - 2.0));
  CHECK(std::abs(s2 - 2.0) < 1e-4);
}

TEST_CASE("l2_sq matches a closed-form Gaussian integral") {
  // integral of exp(-2 x^2) over R is sqrt(pi/2)
  const int n = 4001;
  const Array x = nodes(n, -20.0, 20.0);
  const double dx = x(1) - x(0);
  const Array f = (-x.square()).exp();
  CHECK(cw::l2_sq(f, dx) == doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-10));
}
