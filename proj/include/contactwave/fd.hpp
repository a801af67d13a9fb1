#pragma once

#include <Eigen/Core>

namespace cw {

using Array = Eigen::ArrayXd;

// Finite-difference derivatives on a uniform grid with spacing dx.
// Interior stencils are centered and second order; the outermost nodes use
// one-sided stencils of the same order (two nodes per side for d3).
Array d1(const Array& f, double dx);
Array d2(const Array& f, double dx);
Array d3(const Array& f, double dx);

// Trapezoid-rule quadrature of nodal values.
double trapezoid(const Array& f, double dx);

// Trapezoid quadrature of f^2 (a squared L2 norm).
double l2_sq(const Array& f, double dx);

double sup_abs(const Array& f);

}  // namespace cw
