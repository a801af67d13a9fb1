#pragma once

#include <map>
#include <string>
#include <vector>

#include "contactwave/perturbation.hpp"

namespace cw {

// Convex distance-to-one functions z - ln z - 1 and 1/z + ln z - 1.
// Domain z > 0; they satisfy phi_entropy(z) == psi_entropy(1/z).
double phi_entropy(double z);
double psi_entropy(double z);

struct PertNorms {
  double l2_sq = 0.0;  // squared L2 of (phi, psi, zeta)
  double h1_sq = 0.0;  // adds the squared L2 of the first derivatives
  double linf = 0.0;
};
PertNorms norms(const Perturbation& pert, const Grid& grid);

/// Trapezoid quadrature of
///   R Theta Phi(v/V) + psi^2/2 + Cv Theta Phi(theta/Theta);
/// nonnegative, zero only for a vanishing perturbation.
double relative_entropy(const FlowField& state, const ProfileField& profile, const PhysParams& p,
                        const Grid& grid);

/// Time series of a nonnegative scalar (typically a squared norm).
struct DecaySeries {
  std::vector<double> t;
  std::vector<double> value;
  void push(double time, double val);
};

struct FitResult {
  double exponent = 0.0;      // slope of ln(value) against ln(1+t)
  double log_constant = 0.0;  // intercept
  double rms_residual = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
  int n_used = 0;
};

/// Least squares of ln(value) on ln(1+t) over samples with t in [t_lo, t_hi].
/// Throws InsufficientData (< 8 samples) or NonpositiveValue.
FitResult fit_power_law(const DecaySeries& series, double t_lo, double t_hi);

/// Per-snapshot measurements of the wave profile; running integrals are
/// supplied by the stepper.
struct ProfileDiag {
  double t = 0.0;
  double theta_x_sq = 0.0;
  double ln_x_sq = 0.0;
  double ln_xx_sq = 0.0;
  double ln_xxx_sq = 0.0;
  double far_gap_linf_sq = 0.0;  // max over half lines of sup |Theta - theta_far|^2
  double f_sq = 0.0;
  double g_sq = 0.0;
  double int_ln_x_sq = 0.0;
  double int_ln_xx_sq = 0.0;
  double grad_ratio_sup = 0.0;  // sup (|V_x| + |U|) / |Theta_x|
};
ProfileDiag profile_diag(const ProfileField& field, const PhysParams& p, const Grid& grid);

/// Reshapes snapshot diagnostics into named decay series, including the
/// weighted quantity (1+t) * ||(ln Theta)_xx||^2.
std::map<std::string, DecaySeries> profile_decay_suite(const std::vector<ProfileDiag>& diags);

/// Norms, functionals and running integrals of a perturbed run at one output
/// time. Accumulators integrate over the output cadence by trapezoid.
struct EnergyReport {
  double t = 0.0;
  double l2_sq = 0.0;
  double h1_sq = 0.0;
  double linf = 0.0;
  double rel_entropy = 0.0;
  double dissipation_accum = 0.0;         // int ||phi_x||^2 + ||(psi_x, zeta_x)||_1^2
  double second_deriv_dissipation = 0.0;  // int ||(psi_xx, zeta_xx)||^2
  double weighted_theta_x_accum = 0.0;    // int int Theta_x^2 (phi^2 + zeta^2)
  double source_budget_accum = 0.0;       // int int |F psi| + |G zeta / theta|
};

/// Instantaneous integrands backing the accumulators above.
struct EnergyRates {
  double dissipation = 0.0;
  double second_deriv = 0.0;
  double weighted_theta_x = 0.0;
  double source_budget = 0.0;
};
EnergyRates energy_rates(const Perturbation& pert, const FlowField& state,
                         const ProfileField& profile, const Grid& grid);

struct AprioriReport {
  double sup_h1_sq = 0.0;
  double final_dissipation = 0.0;
  double ratio = 0.0;                  // (sup h1 + dissipation) / (h1(0) + 1)
  double late_increment_fraction = 0.0;  // dissipation gained over the last quarter / total
  double linf_peak = 0.0;
  double linf_final_over_peak = 0.0;
};
AprioriReport apriori_monitor(const std::vector<EnergyReport>& history);

/// True when no pair of samples separated by at least `window` shows growth
/// of the sup norm beyond `tol_factor` (sustained-growth detector).
bool no_sustained_growth(const std::vector<EnergyReport>& history, double window,
                         double tol_factor = 1.05);

}  // namespace cw
