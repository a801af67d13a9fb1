#pragma once

#include <functional>
#include <vector>

#include "contactwave/fd.hpp"
#include "contactwave/params.hpp"

namespace cw {

/// The contact-wave ansatz at one time: temperature Theta of the log-diffusion
/// equation Theta_t = a (ln Theta)_xx, the induced specific volume
/// V = R Theta / p_plus and velocity U = kappa (gamma-1) Theta_x / (gamma R Theta),
/// their spatial derivatives, and the defect sources F, G that make the ansatz
/// an exact solution of the modified flow system.
struct ProfileField {
  double t = 0.0;
  Array Theta, Theta_x, lnTheta_xx, lnTheta_xxx;
  Array V, V_x, U, U_x;
  Array F, G;
};

// ln(x + sqrt(1 + x^2)), evaluated via -k_map(-x) for x < 0 so the large
// negative branch does not cancel.
double k_map(double x);

double theta0(double x, const PhysParams& p);
Array theta0_on_grid(const Grid& grid, const PhysParams& p);

// d/dx of theta0, closed form (no grid).
double theta0_x(double x, const PhysParams& p);

// Reusable closed-form evaluators with the power-law constants precomputed.
std::function<double(double)> theta0_function(const PhysParams& p);
std::function<double(double)> theta0_x_function(const PhysParams& p);

/// Measured initial-profile bounds: trapezoid quadratures over the grid with
/// centered-difference derivatives. Fails with GridTooCoarse if halving dx
/// moves any reported value by more than 5%.
struct BoundReport {
  double l1_theta0_x = 0.0;        // integral of |Theta0_x|
  double l1_far_gap = 0.0;         // integral over each half line of |Theta0 - theta_far|
  double sup_theta0_x = 0.0;
  double l2sq_theta0_x = 0.0;
  double l2sq_ln_theta0_xx = 0.0;
  double l2sq_ln_theta0_xxx = 0.0;
  double max_refine_change = 0.0;  // relative change of the above under dx -> dx/2
};
BoundReport verify_theta0_bounds(const PhysParams& p, const Grid& grid);

/// Rebuilds V, U, derivative arrays from field.Theta (pointwise R*Theta/V ==
/// p_plus holds by construction).
void profile_from_theta(ProfileField& field, const PhysParams& p, const Grid& grid);

/// Fills F and G from the current derivative arrays. F uses the momentum
/// defect coefficient kappa (gamma-1) (a - mu p_plus / R) / (gamma R); G is
/// -mu U_x^2 / V <= 0 pointwise.
void source_terms(ProfileField& field, const PhysParams& p, const Grid& grid);

// Leading coefficient of F in front of ((ln Theta)_xx / Theta)_x.
double forcing_coefficient(const PhysParams& p);

ProfileField make_profile0(const PhysParams& p, const Grid& grid);

/// One Heun step of Theta_t = a (ln Theta)_xx with the far-field ends pinned;
/// throws StepRejected if any stage loses positivity or finiteness. All
/// derived arrays are refreshed.
ProfileField evolve_theta(const ProfileField& field, double dt, const PhysParams& p,
                          const Grid& grid);

/// Time-marching driver for the profile equation. Holds the raw temperature
/// array, applies the dt cap 0.4 dx^2 theta_min / a with adaptive halving,
/// and accumulates the running diagnostics used by the decay suite and the
/// flux-form conservation audit.
class ProfileStepper {
 public:
  ProfileStepper(const PhysParams& p, const Grid& grid);
  ProfileStepper(const PhysParams& p, const Grid& grid, Array theta_init, double t0);

  void advance_to(double t_target);

  double t() const { return t_; }
  const Array& theta() const { return theta_; }
  ProfileField field() const;  // materializes the full ansatz at the current time

  double dt_cap() const;

  // running time integrals of the squared gradient norms of ln Theta
  double int_ln_x_sq() const { return int_ln_x_sq_; }
  double int_ln_xx_sq() const { return int_ln_xx_sq_; }

  // flux-form conservation audit: change of trapezoid(Theta) minus the
  // accumulated boundary flux of a (ln Theta)_x, relative to the mass scale
  double conservation_defect_rel() const;

  long long steps_taken() const { return steps_; }
  double min_theta_seen() const { return min_theta_seen_; }

 private:
  PhysParams p_;
  Grid grid_;
  Array theta_;
  double t_ = 0.0;
  double mass0_ = 0.0;
  double flux_budget_ = 0.0;
  double int_ln_x_sq_ = 0.0;
  double int_ln_xx_sq_ = 0.0;
  long long steps_ = 0;
  double min_theta_seen_ = 0.0;
};

}  // namespace cw
