#include <doctest.h>

#include <cmath>

#include "contactwave/errors.hpp"
#include "contactwave/perturbation.hpp"

using cw::Array;
using cw::Grid;
using cw::InitialData;
using cw::PhysParams;

TEST_CASE("perturbation_of and reconstruction") {
  const PhysParams p;
  const Grid grid = Grid::make(40.0, 801);
  const auto prof = cw::make_profile0(p, grid);

  SUBCASE("profile itself gives a zero perturbation") {
    const auto s = cw::make_initial(prof, InitialData{}, grid);
    const auto pert = cw::perturbation_of(s, prof);
    CHECK(cw::sup_abs(pert.phi) == 0.0);
    CHECK(cw::sup_abs(pert.psi) == 0.0);
    CHECK(cw::sup_abs(pert.zeta) == 0.0);
  }

  SUBCASE("a known bump is recovered exactly and round-trips bit-identically") {
    InitialData spec;
    spec.kind = InitialData::Kind::gaussian;
    spec.amp_phi = 0.01;
    spec.amp_psi = -0.02;
    spec.amp_zeta = 0.03;
    const auto s = cw::make_initial(prof, spec, grid);
    const auto pert = cw::perturbation_of(s, prof);
    const Array g = cw::perturbation_shape(spec, grid);
    // recovery is exact up to one rounding of V + bump
    CHECK(cw::sup_abs(pert.phi - 0.01 * g) < 1e-15);
    const auto back = cw::reconstruct(pert, prof);
    CHECK((back.v == s.v).all());
    CHECK((back.u == s.u).all());
    CHECK((back.theta == s.theta).all());
  }

  SUBCASE("time mismatch is rejected") {
    auto s = cw::make_initial(prof, InitialData{}, grid);
    s.t = 1.0;
    CHECK_THROWS_AS(cw::perturbation_of(s, prof), cw::TimeMismatch);
  }
}

TEST_CASE("perturbation residual characterizes consistent and inconsistent states") {
  const PhysParams p;
  const Grid grid = Grid::make(20.0, 401);
  InitialData spec;
  spec.kind = InitialData::Kind::gaussian;
  spec.amp_phi = 0.02;
  spec.amp_psi = 0.03;
  spec.amp_zeta = 0.05;

  auto residual_at = [&](const Grid& g) {
    cw::ProfileStepper profile(p, g);
    cw::FlowStepper flow(cw::make_initial(profile.field(), spec, g), p, g);
    const double T = 1.0;
    profile.advance_to(T);
    flow.advance_to(T);
    const auto pf_a = profile.field();
    const auto st_a = flow.state();
    const double h = cw::flow_dt_cap(flow.state(), p, g);
    profile.advance_to(T + h);
    flow.advance_to(T + h);
    const auto pf_b = profile.field();
    const auto st_b = flow.state();
    const auto pa = cw::perturbation_of(st_a, pf_a);
    const auto pb = cw::perturbation_of(st_b, pf_b);
    return cw::perturbation_residual(pa, pb, pf_a, pf_b, p, g).l2;
  };

  const double r_coarse = residual_at(grid);
  const Grid fine{grid.half_width, 2 * (grid.n - 1) + 1};
  const double r_fine = residual_at(fine);

  SUBCASE("residual converges under refinement at 2nd order") {
    CHECK(std::log2(r_coarse / r_fine) > 1.8);
  }

  SUBCASE("zero-perturbation run with the tuned viscosity sits at truncation level") {
    cw::PhysParams q = p;
    q.mu = q.mu_zero_forcing();
    cw::ProfileStepper profile(q, grid);
    cw::FlowStepper flow(cw::make_initial(profile.field(), cw::InitialData{}, grid), q, grid);
    profile.advance_to(1.0);
    flow.advance_to(1.0);
    const auto pf_a = profile.field();
    const auto st_a = flow.state();
    const double h = cw::flow_dt_cap(flow.state(), q, grid);
    profile.advance_to(1.0 + h);
    flow.advance_to(1.0 + h);
    const auto pa = cw::perturbation_of(st_a, pf_a);
    const auto pb = cw::perturbation_of(flow.state(), profile.field());
    const double r0 =
        cw::perturbation_residual(pa, pb, pf_a, profile.field(), q, grid).l2;
    CHECK(r0 < r_coarse);  // no bump: strictly below the perturbed-run residual
    CHECK(r0 < 1e-3);
  }

  SUBCASE("manufactured non-solution is detected") {
    cw::ProfileStepper profile(p, grid);
    profile.advance_to(1.0);
    const auto pf_a = profile.field();
    profile.advance_to(1.01);
    const auto pf_b = profile.field();
    const Array bump = 0.05 * cw::perturbation_shape(spec, grid);
    cw::Perturbation ma{pf_a.t, bump, bump, bump};
    cw::Perturbation mb{pf_b.t, bump, bump, bump};
    const double r_bad = cw::perturbation_residual(ma, mb, pf_a, pf_b, p, grid).l2;
    CHECK(r_bad > 100.0 * r_coarse);
  }
}
