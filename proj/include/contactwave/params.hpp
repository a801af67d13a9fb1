#pragma once

#include <algorithm>
#include <cmath>

#include "contactwave/fd.hpp"

namespace cw {

/// Gas and transport constants for the viscous heat-conducting flow, the
/// far-field states of the contact wave, and the profile sharpness
/// parameter. Pressure matches across the wave: R*theta_minus/v_minus ==
/// R*theta_plus/v_plus by construction of v_minus.
struct PhysParams {
  double R = 1.0;
  double gamma = 5.0 / 3.0;
  double mu = 1.0;
  double kappa = 1.0;
  double theta_minus = 0.5;
  double theta_plus = 1.0;
  double v_plus = 1.0;
  int delta0_inverse = 9;  // reciprocal of the sharpness parameter, odd

  double delta0() const { return 1.0 / static_cast<double>(delta0_inverse); }
  double v_minus() const { return v_plus * theta_minus / theta_plus; }
  double p_plus() const { return R * theta_plus / v_plus; }
  double a() const { return kappa * p_plus() * (gamma - 1.0) / (gamma * R * R); }
  double Cv() const { return R / (gamma - 1.0); }
  double theta_far_min() const { return std::min(theta_minus, theta_plus); }

  // Viscosity for which the momentum defect of the wave profile vanishes
  // identically (the diffusivities of the profile equation and of the
  // momentum equation match: a == mu*p_plus/R).
  double mu_zero_forcing() const { return a() * R / p_plus(); }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Uniform truncated mesh standing in for the real line: nodes
/// x_j = -L + j*dx, j = 0..n-1, with x_0 = -L and x_{n-1} = +L.
struct Grid {
  double half_width = 0.0;
  int n = 0;

  double dx() const { return 2.0 * half_width / (n - 1); }
  double x(int j) const { return -half_width + j * dx(); }
  Array nodes() const { return Array::LinSpaced(n, -half_width, half_width); }

  static Grid make(double half_width, int n);  // validates L > 0, n >= 64
};

}  // namespace cw
