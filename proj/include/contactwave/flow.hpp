#pragma once

#include <cstdint>

#include "contactwave/params.hpp"
#include "contactwave/profile.hpp"

namespace cw {

/// Full flow state (specific volume, velocity, temperature) at one time.
/// The outermost nodes are pinned to the far-field constants
/// (v_minus, 0, theta_minus) and (v_plus, 0, theta_plus).
struct FlowField {
  double t = 0.0;
  Array v, u, theta;
};

/// Shape of the initial perturbation added on top of the wave profile.
struct InitialData {
  enum class Kind { none, gaussian, cosine, random_smooth };
  Kind kind = Kind::none;
  double amp_phi = 0.0, amp_psi = 0.0, amp_zeta = 0.0;
  double center = 0.0;
  double width = 1.0;
  std::uint64_t seed = 0;
};

// Unit-amplitude perturbation shape on the grid (max |g| == 1 for non-none
// kinds; the gaussian is exp(-((x-c)/w)^2)).
Array perturbation_shape(const InitialData& spec, const Grid& grid);

/// v0 = V0 + amp_phi*g, u0 = U0 + amp_psi*g, theta0 = Theta0 + amp_zeta*g.
/// Throws InvalidInitialData if positivity fails or the bump reaches the
/// boundary nodes.
FlowField make_initial(const ProfileField& profile0, const InitialData& spec, const Grid& grid);

/// Semi-discrete rate of change plus the exactly-telescoped boundary flux
/// rates of the discrete mass, momentum and energy sums.
struct FlowRates {
  Array kv, ku, ktheta;
  double mass_flux = 0.0;    // d/dt of trapezoid(v)
  double momentum_flux = 0.0;
  double energy_flux = 0.0;  // d/dt of trapezoid(Cv theta + u^2/2)
};
FlowRates flow_rhs(const FlowField& s, const PhysParams& p, const Grid& grid);

/// One Heun step; throws StepRejected on positivity/finiteness violation.
FlowField step_flow(const FlowField& s, double dt, const PhysParams& p, const Grid& grid);

/// Stability cap: 0.3 * min(dx^2 * min(v) * min(1/mu, Cv/kappa), dx / c_max)
/// with c_max the maximal sqrt(gamma R theta / v) / v over the grid.
double flow_dt_cap(const FlowField& s, const PhysParams& p, const Grid& grid);

/// Conservation bookkeeping accumulated while stepping. Budgets integrate the
/// stage-consistent boundary flux rates; defects compare them with the actual
/// change of the discrete sums.
struct FlowAudit {
  double mass0 = 0.0, momentum0 = 0.0, energy0 = 0.0;
  double mass_budget = 0.0, momentum_budget = 0.0, energy_budget = 0.0;
  double max_step_mass_defect_rel = 0.0;  // per-step mass identity, relative to mass
  double momentum_scale = 0.0;            // max over steps of trapezoid(|u|)
  double min_v_seen = 0.0, min_theta_seen = 0.0;
};

class FlowStepper {
 public:
  FlowStepper(FlowField initial, const PhysParams& p, const Grid& grid);

  void advance_to(double t_target);
  void advance_steps(long long n_steps);

  const FlowField& state() const { return state_; }
  double t() const { return state_.t; }
  const FlowAudit& audit() const { return audit_; }
  long long steps_taken() const { return steps_; }

  double mass_defect_rel() const;      // accumulated, relative to mass scale
  double momentum_defect_rel() const;  // relative to momentum scale
  double energy_defect_rel() const;    // relative to energy scale

 private:
  void one_step(double dt_hint);

  FlowField state_;
  PhysParams p_;
  Grid grid_;
  FlowAudit audit_;
  long long steps_ = 0;
};

}  // namespace cw
