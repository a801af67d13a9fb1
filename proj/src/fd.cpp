#include "contactwave/fd.hpp"

#include <stdexcept>

namespace cw {

// All stencils are written as combinations of differences so that constant
// fields map to exact floating-point zeros.

Array d1(const Array& f, double dx) {
  const Eigen::Index n = f.size();
  if (n < 3) throw std::invalid_argument("d1: need at least 3 nodes");
  Array g(n);
  g.segment(1, n - 2) = (f.segment(2, n - 2) - f.segment(0, n - 2)) / (2.0 * dx);
  g(0) = (4.0 * (f(1) - f(0)) - (f(2) - f(0))) / (2.0 * dx);
  g(n - 1) = -(4.0 * (f(n - 2) - f(n - 1)) - (f(n - 3) - f(n - 1))) / (2.0 * dx);
  return g;
}

Array d2(const Array& f, double dx) {
  const Eigen::Index n = f.size();
  if (n < 4) throw std::invalid_argument("d2: need at least 4 nodes");
  const double h2 = dx * dx;
  Array g(n);
  g.segment(1, n - 2) =
      ((f.segment(2, n - 2) - f.segment(1, n - 2)) - (f.segment(1, n - 2) - f.segment(0, n - 2))) /
      h2;
  g(0) = (-5.0 * (f(1) - f(0)) + 4.0 * (f(2) - f(0)) - (f(3) - f(0))) / h2;
  g(n - 1) =
      (-5.0 * (f(n - 2) - f(n - 1)) + 4.0 * (f(n - 3) - f(n - 1)) - (f(n - 4) - f(n - 1))) / h2;
  return g;
}

Array d3(const Array& f, double dx) {
  const Eigen::Index n = f.size();
  if (n < 5) throw std::invalid_argument("d3: need at least 5 nodes");
  const double h3 = dx * dx * dx;
  Array g(n);
  g.segment(2, n - 4) = ((f.segment(4, n - 4) - f.segment(0, n - 4)) -
                         2.0 * (f.segment(3, n - 4) - f.segment(1, n - 4))) /
                        (2.0 * h3);
  g(0) = (18.0 * (f(1) - f(0)) - 24.0 * (f(2) - f(0)) + 14.0 * (f(3) - f(0)) -
          3.0 * (f(4) - f(0))) /
         (2.0 * h3);
  g(1) = (10.0 * (f(1) - f(0)) - 12.0 * (f(2) - f(0)) + 6.0 * (f(3) - f(0)) - (f(4) - f(0))) /
         (2.0 * h3);
  g(n - 1) = -(18.0 * (f(n - 2) - f(n - 1)) - 24.0 * (f(n - 3) - f(n - 1)) +
               14.0 * (f(n - 4) - f(n - 1)) - 3.0 * (f(n - 5) - f(n - 1))) /
             (2.0 * h3);
  g(n - 2) = -(10.0 * (f(n - 2) - f(n - 1)) - 12.0 * (f(n - 3) - f(n - 1)) +
               6.0 * (f(n - 4) - f(n - 1)) - (f(n - 5) - f(n - 1))) /
             (2.0 * h3);
  return g;
}

double trapezoid(const Array& f, double dx) {
  const Eigen::Index n = f.size();
  if (n < 2) throw std::invalid_argument("trapezoid: need at least 2 nodes");
  return dx * (f.sum() - 0.5 * (f(0) + f(n - 1)));
}

double l2_sq(const Array& f, double dx) {
  const Eigen::Index n = f.size();
  if (n < 2) throw std::invalid_argument("l2_sq: need at least 2 nodes");
  return dx * (f.square().sum() - 0.5 * (f(0) * f(0) + f(n - 1) * f(n - 1)));
}

double sup_abs(const Array& f) { return f.abs().maxCoeff(); }

}  // namespace cw
