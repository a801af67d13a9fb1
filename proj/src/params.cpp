#include "contactwave/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cw {

namespace {
void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}
}  // namespace

void PhysParams::validate() const {
  require(std::isfinite(R) && R > 0.0, "R must be positive");
  require(std::isfinite(gamma) && gamma > 1.0, "gamma must exceed 1");
  require(std::isfinite(mu) && mu > 0.0, "mu must be positive");
  require(std::isfinite(kappa) && kappa > 0.0, "kappa must be positive");
  require(std::isfinite(theta_minus) && theta_minus > 0.0, "theta_minus must be positive");
  require(std::isfinite(theta_plus) && theta_plus > 0.0, "theta_plus must be positive");
  require(std::isfinite(v_plus) && v_plus > 0.0, "v_plus must be positive");
  require(delta0_inverse >= 1, "delta0 reciprocal must be a positive integer");
  require(delta0_inverse % 2 == 1, "delta0 reciprocal must be odd");
  // H = theta^{1/delta0} must stay a positive normal double over the theta
  // range, otherwise the profile construction loses the lower far field.
  const double hmin = std::pow(theta_far_min(), static_cast<double>(delta0_inverse));
  require(hmin > 0.0 && std::isnormal(hmin),
          "delta0 too small for the theta range: theta^(1/delta0) underflows");
  require(a() > 0.0, "derived diffusivity a must be positive");
}

Grid Grid::make(double half_width, int n) {
  if (!(std::isfinite(half_width) && half_width > 0.0))
    throw std::invalid_argument("grid half width must be positive");
  if (n < 64) throw std::invalid_argument("grid must have at least 64 nodes");
  return Grid{half_width, n};
}

}  // namespace cw
