#pragma once

#include <functional>
#include <vector>

#include "contactwave/params.hpp"

namespace cw {

/// Controls for the kernel-convolution quadrature. The integration window
/// covers +-window_factor * sqrt(4 a t) around the evaluation point; the mass
/// outside it is added in closed form from the far-field limits via erfc.
/// Node counts double until the result moves by no more than rel_tol.
struct QuadratureSpec {
  enum class Rule { gauss16, simpson };
  Rule rule = Rule::gauss16;
  int initial_panels = 32;
  double rel_tol = 1e-8;
  int max_doublings = 16;
  double window_factor = 8.0;
};

/// Value at (x, t) of the solution of w_t = a w_xx with initial data f, where
/// f tends to f_left at -inf and f_right at +inf. Pure quadrature: no grid,
/// no time stepping. Throws QuadratureNotConverged.
double heat_convolve(const std::function<double(double)>& f, double f_left, double f_right,
                     double x, double t, double a, const QuadratureSpec& q);

/// Exact solution of the LINEAR heat equation theta2_t = a theta2_xx with the
/// contact-wave initial data; the independent oracle for the nonlinear
/// profile evolution.
double heat_kernel_theta2(double x, double t, const PhysParams& p, const QuadratureSpec& q);
Array heat_kernel_theta2(const Array& x, double t, const PhysParams& p, const QuadratureSpec& q);

/// Precomputed-sample form of the same oracle for series work. The initial
/// gradient is tabulated once on a fine Simpson grid over its effective
/// support; squared L2 norms of theta2_x then reduce to a lag correlation
/// against the heat kernel at doubled time (the x-integral is exact).
class HeatKernelOracle {
 public:
  explicit HeatKernelOracle(const PhysParams& p, double dh = 0.02, double support_tol = 1e-14);

  double grad_l2_sq(double t) const;          // || theta2_x(., t) ||^2, t > 0
  double grad_at(double x, double t) const;   // theta2_x(x, t), t > 0

  double support_lo() const { return h0_; }
  double support_hi() const { return h0_ + dh_ * (static_cast<double>(wm_.size()) - 1.0); }

 private:
  double a_;
  double h0_, dh_;
  std::vector<double> m_;     // Theta0' samples
  std::vector<double> wm_;    // Simpson-weighted samples
  std::vector<double> corr_;  // corr[k] = sum_i wm_i wm_{i+k}
};

}  // namespace cw
