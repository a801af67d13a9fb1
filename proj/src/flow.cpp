#include "contactwave/flow.hpp"

#include <cmath>
#include <random>

#include "contactwave/errors.hpp"

namespace cw {

Array perturbation_shape(const InitialData& spec, const Grid& grid) {
  const Array x = grid.nodes();
  switch (spec.kind) {
    case InitialData::Kind::none:
      return Array::Zero(grid.n);
    case InitialData::Kind::gaussian:
      return (-((x - spec.center) / spec.width).square()).exp();
    case InitialData::Kind::cosine: {
      Array g = Array::Zero(grid.n);
      for (int j = 0; j < grid.n; ++j) {
        const double r = (x(j) - spec.center) / spec.width;
        if (std::abs(r) < 1.0) {
          const double c = std::cos(0.5 * M_PI * r);
          g(j) = c * c;
        }
      }
      return g;
    }
    case InitialData::Kind::random_smooth: {
      std::mt19937_64 rng(spec.seed);
      std::uniform_real_distribution<double> uni(-1.0, 1.0);
      double ac[5], bc[5];
      for (int k = 0; k < 5; ++k) {
        ac[k] = uni(rng);
        bc[k] = uni(rng);
      }
      Array g(grid.n);
      for (int j = 0; j < grid.n; ++j) {
        const double r = (x(j) - spec.center) / spec.width;
        double s = 0.0;
        for (int k = 0; k < 5; ++k)
          s += ac[k] * std::cos((k + 1) * M_PI * r / 3.0) +
               bc[k] * std::sin((k + 1) * M_PI * r / 3.0);
        g(j) = s * std::exp(-r * r);
      }
      const double peak = g.abs().maxCoeff();
      if (peak > 0.0) g /= peak;
      return g;
    }
  }
  return Array::Zero(grid.n);
}

FlowField make_initial(const ProfileField& profile0, const InitialData& spec, const Grid& grid) {
  const Array g = perturbation_shape(spec, grid);
  if (std::max(std::abs(g(0)), std::abs(g(grid.n - 1))) > 1e-10)
    throw InvalidInitialData("perturbation does not vanish at the domain boundary");
  FlowField s;
  s.t = profile0.t;
  s.v = profile0.V + spec.amp_phi * g;
  s.u = profile0.U + spec.amp_psi * g;
  s.theta = profile0.Theta + spec.amp_zeta * g;
  if ((s.v <= 0.0).any()) throw InvalidInitialData("initial specific volume not positive");
  if ((s.theta <= 0.0).any()) throw InvalidInitialData("initial temperature not positive");
  return s;
}

FlowRates flow_rhs(const FlowField& s, const PhysParams& p, const Grid& grid) {
  const int n = grid.n;
  const double dx = grid.dx();
  const double Cv = p.Cv();

  const Array pr = p.R * s.theta / s.v;  // nodal pressure

  // edge quantities, edge e between nodes e and e+1
  const Array ubar = 0.5 * (s.u.head(n - 1) + s.u.tail(n - 1));
  const Array pbar = 0.5 * (pr.head(n - 1) + pr.tail(n - 1));
  const Array vbar = 0.5 * (s.v.head(n - 1) + s.v.tail(n - 1));
  const Array du = (s.u.tail(n - 1) - s.u.head(n - 1)) / dx;
  const Array dth = (s.theta.tail(n - 1) - s.theta.head(n - 1)) / dx;
  const Array gmom = -pbar + p.mu * du / vbar;
  const Array hheat = p.kappa * dth / vbar;
  const Array diss = p.mu * du.square() / vbar;  // viscous heating per edge

  FlowRates r;
  r.kv = Array::Zero(n);
  r.ku = Array::Zero(n);
  r.ktheta = Array::Zero(n);

  const int ni = n - 2;  // interior nodes 1..n-2
  r.kv.segment(1, ni) = (ubar.tail(ni) - ubar.head(ni)) / dx;
  r.ku.segment(1, ni) = (gmom.tail(ni) - gmom.head(ni)) / dx;
  const Array work = pr.segment(1, ni) * (s.u.tail(ni) - s.u.head(ni)) / (2.0 * dx);
  const Array heating = 0.5 * (diss.tail(ni) + diss.head(ni));
  r.ktheta.segment(1, ni) =
      (-work + heating + (hheat.tail(ni) - hheat.head(ni)) / dx) / Cv;

  r.mass_flux = ubar(n - 2) - ubar(0);
  r.momentum_flux = gmom(n - 2) - gmom(0);
  // exact telescoped boundary rate of trapezoid(Cv theta + u^2/2)
  r.energy_flux = 0.5 * (pr(0) * s.u(1) - pr(n - 1) * s.u(n - 2)) + (hheat(n - 2) - hheat(0)) +
                  (gmom(n - 2) * s.u(n - 1) - gmom(0) * s.u(0)) -
                  0.5 * dx * (diss(0) + diss(n - 2));
  return r;
}

namespace {
void check_admissible(const FlowField& s) {
  if (!s.v.isFinite().all() || !s.u.isFinite().all() || !s.theta.isFinite().all() ||
      (s.v <= 0.0).any() || (s.theta <= 0.0).any())
    throw StepRejected("flow state lost positivity or finiteness");
}

double energy_sum(const FlowField& s, const PhysParams& p, double dx) {
  return trapezoid(p.Cv() * s.theta + 0.5 * s.u.square(), dx);
}
}  // namespace

FlowField step_flow(const FlowField& s, double dt, const PhysParams& p, const Grid& grid) {
  const FlowRates r1 = flow_rhs(s, p, grid);
  FlowField mid{s.t + dt, s.v + dt * r1.kv, s.u + dt * r1.ku, s.theta + dt * r1.ktheta};
  check_admissible(mid);
  const FlowRates r2 = flow_rhs(mid, p, grid);
  FlowField next{s.t + dt, s.v + 0.5 * dt * (r1.kv + r2.kv), s.u + 0.5 * dt * (r1.ku + r2.ku),
                 s.theta + 0.5 * dt * (r1.ktheta + r2.ktheta)};
  check_admissible(next);
  return next;
}

double flow_dt_cap(const FlowField& s, const PhysParams& p, const Grid& grid) {
  const double dx = grid.dx();
  const double diff_cap =
      dx * dx * s.v.minCoeff() * std::min(1.0 / p.mu, p.Cv() / p.kappa);
  const double c_max = ((p.gamma * p.R * s.theta / s.v).sqrt() / s.v).maxCoeff();
  const double adv_cap = dx / c_max;
  return 0.3 * std::min(diff_cap, adv_cap);
}

FlowStepper::FlowStepper(FlowField initial, const PhysParams& p, const Grid& grid)
    : state_(std::move(initial)), p_(p), grid_(grid) {
  check_admissible(state_);
  const double dx = grid_.dx();
  audit_.mass0 = trapezoid(state_.v, dx);
  audit_.momentum0 = trapezoid(state_.u, dx);
  audit_.energy0 = energy_sum(state_, p_, dx);
  audit_.momentum_scale = trapezoid(state_.u.abs(), dx);
  audit_.min_v_seen = state_.v.minCoeff();
  audit_.min_theta_seen = state_.theta.minCoeff();
}

void FlowStepper::one_step(double dt_hint) {
  const double dx = grid_.dx();
  double dt = dt_hint;
  const double dt_floor = dt_hint * std::pow(2.0, -25);
  const double mass_before = trapezoid(state_.v, dx);
  for (;;) {
    try {
      const FlowRates r1 = flow_rhs(state_, p_, grid_);
      FlowField mid{state_.t + dt, state_.v + dt * r1.kv, state_.u + dt * r1.ku,
                    state_.theta + dt * r1.ktheta};
      check_admissible(mid);
      const FlowRates r2 = flow_rhs(mid, p_, grid_);
      FlowField next{state_.t + dt, state_.v + 0.5 * dt * (r1.kv + r2.kv),
                     state_.u + 0.5 * dt * (r1.ku + r2.ku),
                     state_.theta + 0.5 * dt * (r1.ktheta + r2.ktheta)};
      check_admissible(next);

      const double mass_step = 0.5 * dt * (r1.mass_flux + r2.mass_flux);
      audit_.mass_budget += mass_step;
      audit_.momentum_budget += 0.5 * dt * (r1.momentum_flux + r2.momentum_flux);
      audit_.energy_budget += 0.5 * dt * (r1.energy_flux + r2.energy_flux);

      state_ = std::move(next);
      ++steps_;
      const double mass_after = trapezoid(state_.v, dx);
      const double defect =
          std::abs((mass_after - mass_before) - mass_step) / std::abs(audit_.mass0);
      audit_.max_step_mass_defect_rel = std::max(audit_.max_step_mass_defect_rel, defect);
      audit_.momentum_scale = std::max(audit_.momentum_scale, trapezoid(state_.u.abs(), dx));
      audit_.min_v_seen = std::min(audit_.min_v_seen, state_.v.minCoeff());
      audit_.min_theta_seen = std::min(audit_.min_theta_seen, state_.theta.minCoeff());
      return;
    } catch (const StepRejected&) {
      dt *= 0.5;
      if (dt < dt_floor)
        throw BlowUp("flow step size collapsed at t=" + std::to_string(state_.t));
    }
  }
}

void FlowStepper::advance_to(double t_target) {
  if (t_target <= state_.t) return;
  const double eps = 1e-12 * std::max(1.0, std::abs(t_target));
  while (t_target - state_.t > eps) {
    const double dt = std::min(flow_dt_cap(state_, p_, grid_), t_target - state_.t);
    one_step(dt);
  }
  state_.t = t_target;
}

void FlowStepper::advance_steps(long long n_steps) {
  for (long long i = 0; i < n_steps; ++i) one_step(flow_dt_cap(state_, p_, grid_));
}

double FlowStepper::mass_defect_rel() const {
  const double mass = trapezoid(state_.v, grid_.dx());
  return std::abs(mass - audit_.mass0 - audit_.mass_budget) / std::abs(audit_.mass0);
}

double FlowStepper::momentum_defect_rel() const {
  const double mom = trapezoid(state_.u, grid_.dx());
  const double scale = std::max(audit_.momentum_scale, 1e-300);
  return std::abs(mom - audit_.momentum0 - audit_.momentum_budget) / scale;
}

double FlowStepper::energy_defect_rel() const {
  const double en = energy_sum(state_, p_, grid_.dx());
  return std::abs(en - audit_.energy0 - audit_.energy_budget) / std::abs(audit_.energy0);
}

}  // namespace cw
