#include <doctest.h>

#include <cmath>

#include "contactwave/errors.hpp"
#include "contactwave/fd.hpp"
#include "contactwave/profile.hpp"

using cw::Array;
using cw::Grid;
using cw::PhysParams;

namespace {

PhysParams default_params() {
  PhysParams p;  // R=1, gamma=5/3, mu=kappa=1, theta=(0.5,1), v_plus=1, delta0=1/9
  return p;
}

// Independent oracle for the initial profile: composite Simpson for the
// Gaussian integral instead of the erf closed form used by the implementation.
double theta0_by_quadrature(double x, const PhysParams& p) {
  const double inv = static_cast<double>(p.delta0_inverse);
  const double hp = std::pow(p.theta_plus, inv);
  const double hm = std::pow(p.theta_minus, inv);
  const double K = cw::k_map(x);
  const int m = 4000;
  const double h = K / m;
  double s = 1.0 + std::exp(-K * K);
  for (int i = 1; i < m; i += 2) s += 4.0 * std::exp(-(i * h) * (i * h));
  for (int i = 2; i < m; i += 2) s += 2.0 * std::exp(-(i * h) * (i * h));
  const double integral = (m == 0) ? 0.0 : s * h / 3.0;
  const double H = 0.5 * (hp + hm) + (hp - hm) / std::sqrt(M_PI) * integral;
  return std::pow(H, p.delta0());
}

}  // namespace

TEST_CASE("k_map basics") {
  CHECK(cw::k_map(0.0) == 0.0);
  CHECK(cw::k_map(1.0) == doctest::Approx(0.8813735870195430).epsilon(1e-14));
  for (double x : {0.1, 0.7, 3.0, 25.0, 1e4, 1e8}) {
    CHECK(cw::k_map(-x) == doctest::Approx(-cw::k_map(x)).epsilon(1e-15));
    CHECK(std::isfinite(cw::k_map(-x)));
  }
}

TEST_CASE("theta0 matches the quadrature oracle and its stated values") {
  const PhysParams p = default_params();

  SUBCASE("degenerate wave is constant") {
    PhysParams q = p;
    q.theta_minus = q.theta_plus = 1.0;
    for (double x : {-5.0, 0.0, 7.0}) CHECK(cw::theta0(x, q) == 1.0);
  }

  SUBCASE("midpoint value") {
    const double inv = static_cast<double>(p.delta0_inverse);
    const double expected =
        std::pow(0.5 * (std::pow(p.theta_plus, inv) + std::pow(p.theta_minus, inv)),
                 p.delta0());
    CHECK(cw::theta0(0.0, p) == doctest::Approx(expected).epsilon(1e-14));
  }

  SUBCASE("bounded, monotone, correct limits") {
    double prev = cw::theta0(-1e6, p);
    CHECK(prev == doctest::Approx(p.theta_minus).epsilon(1e-12));
    for (double x = -40.0; x <= 40.0; x += 0.5) {
      const double v = cw::theta0(x, p);
      CHECK(v > p.theta_minus - 1e-15);
      CHECK(v < p.theta_plus + 1e-15);
      CHECK(v >= prev);
      prev = v;
    }
    CHECK(std::abs(cw::theta0(1e3, p) - p.theta_plus) < 1e-2);
  }

  SUBCASE("agrees with independent quadrature") {
    for (double x : {-30.0, -5.0, -1.0, 0.0, 0.3, 2.0, 10.0}) {
      CHECK(cw::theta0(x, p) == doctest::Approx(theta0_by_quadrature(x, p)).epsilon(1e-11));
    }
  }

  SUBCASE("reversed ordering handled symmetrically") {
    PhysParams q = p;
    std::swap(q.theta_minus, q.theta_plus);
    double prev = cw::theta0(-1e6, q);
    CHECK(prev == doctest::Approx(q.theta_minus).epsilon(1e-12));
    for (double x = -20.0; x <= 20.0; x += 1.0) {
      const double v = cw::theta0(x, q);
      CHECK(v <= prev + 1e-15);
      prev = v;
    }
  }

  SUBCASE("closed-form derivative matches a finite difference") {
    for (double x : {-8.0, -1.0, 0.0, 2.5}) {
      const double h = 1e-6;
      const double fd = (cw::theta0(x + h, p) - cw::theta0(x - h, p)) / (2.0 * h);
      CHECK(cw::theta0_x(x, p) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("verify_theta0_bounds") {
  PhysParams p = default_params();
  const Grid grid = Grid::make(150.0, 6001);

  SUBCASE("degenerate wave reports all zeros") {
    PhysParams q = p;
    q.theta_minus = q.theta_plus = 1.0;
    const auto r = cw::verify_theta0_bounds(q, grid);
    CHECK(r.l1_theta0_x == 0.0);
    CHECK(r.l1_far_gap == 0.0);
    CHECK(r.sup_theta0_x == 0.0);
    CHECK(r.l2sq_theta0_x == 0.0);
    CHECK(r.l2sq_ln_theta0_xx == 0.0);
    CHECK(r.l2sq_ln_theta0_xxx == 0.0);
  }

  SUBCASE("total variation equals the temperature jump") {
    const auto r = cw::verify_theta0_bounds(p, grid);
    CHECK(r.l1_theta0_x ==
          doctest::Approx(p.theta_plus - p.theta_minus).epsilon(1e-6));
    CHECK(r.l1_far_gap > 0.0);
    CHECK(r.max_refine_change < 0.05);
  }

  SUBCASE("sup of the gradient scales linearly in delta0") {
    PhysParams p9 = p;
    p9.delta0_inverse = 9;
    PhysParams p33 = p;
    p33.delta0_inverse = 33;
    const auto r9 = cw::verify_theta0_bounds(p9, grid);
    const auto r33 = cw::verify_theta0_bounds(p33, grid);
    const double measured = r33.sup_theta0_x / r9.sup_theta0_x;
    const double predicted = 9.0 / 33.0;
    CHECK(measured / predicted > 0.5);
    CHECK(measured / predicted < 2.0);
  }

  SUBCASE("coarse grid is rejected") {
    const Grid coarse = Grid::make(150.0, 65);
    CHECK_THROWS_AS(cw::verify_theta0_bounds(p, coarse), cw::GridTooCoarse);
  }
}

TEST_CASE("profile_from_theta identities") {
  const PhysParams p = default_params();
  const Grid grid = Grid::make(60.0, 1201);

  SUBCASE("constant temperature gives the far-field state") {
    cw::ProfileField f;
    f.Theta = Array::Constant(grid.n, p.theta_plus);
    cw::profile_from_theta(f, p, grid);
    CHECK(cw::sup_abs(f.V - p.v_plus) < 1e-14);
    CHECK(cw::sup_abs(f.U) == 0.0);
  }

  SUBCASE("pressure identity holds pointwise") {
    const auto f = cw::make_profile0(p, grid);
    const Array pressure = p.R * f.Theta / f.V;
    CHECK(cw::sup_abs(pressure - p.p_plus()) < 4e-16 * p.p_plus());
  }

  SUBCASE("discrete volume rate matches the velocity divergence at 2nd order") {
    auto residual_at = [&](int n_nodes) {
      const Grid g = Grid::make(60.0, n_nodes);
      cw::ProfileStepper stepper(p, g);
      const auto f0 = stepper.field();
      const double dt = 0.5 * stepper.dt_cap();
      const auto f1 = cw::evolve_theta(f0, dt, p, g);
      const Array vdot = (f1.V - f0.V) / dt;
      const Array ux_mid = 0.5 * (f0.U_x + f1.U_x);
      double acc = 0.0;
      for (int j = 0; j < g.n; ++j)
        if (std::abs(g.x(j)) <= 0.9 * g.half_width) acc += std::pow(vdot(j) - ux_mid(j), 2) * g.dx();
      return std::sqrt(acc);
    };
    const double r1 = residual_at(601);
    const double r2 = residual_at(1201);
    CHECK(std::log2(r1 / r2) > 1.8);
  }
}

TEST_CASE("source terms") {
  const PhysParams p = default_params();
  const Grid grid = Grid::make(60.0, 1201);

  SUBCASE("constant profile has no defect") {
    cw::ProfileField f;
    f.Theta = Array::Constant(grid.n, 0.8);
    cw::profile_from_theta(f, p, grid);
    cw::source_terms(f, p, grid);
    CHECK(cw::sup_abs(f.F) == 0.0);
    CHECK(cw::sup_abs(f.G) == 0.0);
  }

  SUBCASE("tuned viscosity cancels the momentum defect but not the energy defect") {
    PhysParams q = p;
    q.mu = q.mu_zero_forcing();
    CHECK(std::abs(cw::forcing_coefficient(q)) < 1e-16);
    const auto f = cw::make_profile0(q, grid);
    CHECK(cw::sup_abs(f.F) < 1e-14);
    CHECK(cw::sup_abs(f.G) > 0.0);
  }

  SUBCASE("G is nonpositive pointwise") {
    const auto f = cw::make_profile0(p, grid);
    CHECK((f.G <= 0.0).all());
    CHECK(cw::sup_abs(f.G) > 0.0);
  }
}

TEST_CASE("evolve_theta") {
  const PhysParams p = default_params();
  const Grid grid = Grid::make(60.0, 1201);

  SUBCASE("constant state is a fixed point to machine precision") {
    cw::ProfileField f;
    f.t = 0.0;
    f.Theta = Array::Constant(grid.n, 0.7);
    cw::profile_from_theta(f, p, grid);
    cw::source_terms(f, p, grid);
    const auto g = cw::evolve_theta(f, 1e-3, p, grid);
    CHECK((g.Theta == f.Theta).all());
  }

  SUBCASE("a huge step is rejected") {
    const auto f = cw::make_profile0(p, grid);
    CHECK_THROWS_AS(cw::evolve_theta(f, 1e6, p, grid), cw::StepRejected);
  }

  SUBCASE("three-grid Richardson estimate shows order at least 1.8") {
    auto solution_at = [&](int n_nodes) {
      const Grid g = Grid::make(20.0, n_nodes);
      cw::ProfileStepper stepper(p, g);
      stepper.advance_to(1.0);
      return stepper.theta();
    };
    const Array c = solution_at(401);
    const Array m = solution_at(801);
    const Array f = solution_at(1601);
    double e1 = 0.0, e2 = 0.0;
    for (int j = 0; j < 401; ++j) {
      e1 += std::pow(c(j) - m(2 * j), 2);
      e2 += std::pow(m(2 * j) - f(4 * j), 2);
    }
    const double order = 0.5 * std::log2(e1 / e2);  // halves because of the squares
    CHECK(order > 1.8);
  }

  SUBCASE("positivity, monotonicity and flux-form conservation hold on a run") {
    cw::ProfileStepper stepper(p, grid);
    stepper.advance_to(2.0);
    CHECK(stepper.min_theta_seen() > 0.0);
    CHECK(stepper.min_theta_seen() >= p.theta_minus - 1e-12);
    const Array theta = stepper.theta();
    for (int j = 1; j < grid.n; ++j) CHECK(theta(j) - theta(j - 1) > -1e-12);
    CHECK(stepper.conservation_defect_rel() < 1e-6);
    // running integrals are positive and ordered sensibly
    CHECK(stepper.int_ln_x_sq() > 0.0);
    CHECK(stepper.int_ln_xx_sq() > 0.0);
  }
}
