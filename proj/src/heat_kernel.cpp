#include "contactwave/heat_kernel.hpp"

#include <cmath>

#include "contactwave/errors.hpp"
#include "contactwave/profile.hpp"

namespace cw {

namespace {

// 16-point Gauss-Legendre rule on [-1, 1] (symmetric halves).
constexpr double kGlNode[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr double kGlWeight[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

// Integrand in the scaled variable y = (h - x) / sqrt(4 a t):
// f(x + s y) exp(-y^2) / sqrt(pi) over [-F, F].
double window_integral(const std::function<double(double)>& f, double x, double s, double F,
                       int panels, QuadratureSpec::Rule rule) {
  const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
  double sum = 0.0;
  if (rule == QuadratureSpec::Rule::gauss16) {
    const double w = 2.0 * F / panels;
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double yc = -F + (pnl + 0.5) * w;
      for (int i = 0; i < 8; ++i) {
        const double dy = 0.5 * w * kGlNode[i];
        const double y1 = yc + dy, y2 = yc - dy;
        sum += 0.5 * w * kGlWeight[i] *
               (f(x + s * y1) * std::exp(-y1 * y1) + f(x + s * y2) * std::exp(-y2 * y2));
      }
    }
  } else {
    const int m = 2 * panels;  // Simpson with m intervals, m even
    const double hstep = 2.0 * F / m;
    auto g = [&](int i) {
      const double y = -F + i * hstep;
      return f(x + s * y) * std::exp(-y * y);
    };
    sum = g(0) + g(m);
    for (int i = 1; i < m; i += 2) sum += 4.0 * g(i);
    for (int i = 2; i < m; i += 2) sum += 2.0 * g(i);
    sum *= hstep / 3.0;
  }
  return sum * inv_sqrt_pi;
}

}  // namespace

double heat_convolve(const std::function<double(double)>& f, double f_left, double f_right,
                     double x, double t, double a, const QuadratureSpec& q) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_convolve: t must be positive");
  const double s = std::sqrt(4.0 * a * t);
  const double F = q.window_factor;
  // mass of the kernel outside the window, attributed to the far fields
  const double tail = 0.5 * std::erfc(F) * (f_left + f_right);

  int panels = q.initial_panels;
  double prev = window_integral(f, x, s, F, panels, q.rule);
  for (int d = 0; d < q.max_doublings; ++d) {
    panels *= 2;
    const double cur = window_integral(f, x, s, F, panels, q.rule);
    const double scale = std::max({std::abs(cur), std::abs(prev), 1e-300});
    if (std::abs(cur - prev) <= q.rel_tol * scale) return cur + tail;
    prev = cur;
  }
  throw QuadratureNotConverged("heat_convolve: no convergence at x=" + std::to_string(x) +
                               " t=" + std::to_string(t));
}

double heat_kernel_theta2(double x, double t, const PhysParams& p, const QuadratureSpec& q) {
  return heat_convolve(theta0_function(p), p.theta_minus, p.theta_plus, x, t, p.a(), q);
}

Array heat_kernel_theta2(const Array& x, double t, const PhysParams& p, const QuadratureSpec& q) {
  const auto f = theta0_function(p);
  Array out(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j)
    out(j) = heat_convolve(f, p.theta_minus, p.theta_plus, x(j), t, p.a(), q);
  return out;
}

HeatKernelOracle::HeatKernelOracle(const PhysParams& p, double dh, double support_tol)
    : a_(p.a()), dh_(dh) {
  const auto m = theta0_x_function(p);
  const double peak = std::max(std::abs(m(0.0)), 1e-300);
  const double cutoff = support_tol * peak;
  // expand until the gradient is negligible on three consecutive probes
  auto reach = [&](double dir) {
    double h = dir;
    int quiet = 0;
    while (std::abs(h) < 4000.0) {
      quiet = (std::abs(m(h)) < cutoff) ? quiet + 1 : 0;
      if (quiet >= 3) break;
      h += dir;
    }
    return h;
  };
  const double lo = reach(-1.0) - 2.0, hi = reach(1.0) + 2.0;
  // Simpson grid needs an even interval count
  long n_int = static_cast<long>(std::ceil((hi - lo) / dh));
  if (n_int % 2 != 0) ++n_int;
  const long n = n_int + 1;
  h0_ = lo;
  dh_ = (hi - lo) / static_cast<double>(n_int);
  m_.resize(n);
  wm_.resize(n);
  for (long i = 0; i < n; ++i) {
    m_[i] = m(h0_ + dh_ * static_cast<double>(i));
    double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    wm_[i] = m_[i] * w * dh_ / 3.0;
  }
  corr_.assign(n, 0.0);
  for (long k = 0; k < n; ++k) {
    double s = 0.0;
    for (long i = 0; i + k < n; ++i) s += wm_[i] * wm_[i + k];
    corr_[k] = s;
  }
}

double HeatKernelOracle::grad_l2_sq(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("grad_l2_sq: t must be positive");
  // int theta2_x^2 dx = int int m(h) m(h') G_{2t}(h - h') dh dh'
  const double var = 8.0 * a_ * t;  // (sqrt(4 a (2t)))^2 / ... variance term of G_{2t}
  const double norm = 1.0 / std::sqrt(M_PI * var);
  const long n = static_cast<long>(corr_.size());
  double sum = corr_[0];
  for (long k = 1; k < n; ++k) {
    const double z = dh_ * static_cast<double>(k);
    const double g = std::exp(-z * z / var);
    if (g == 0.0) break;
    sum += 2.0 * corr_[k] * g;
  }
  return sum * norm;
}

double HeatKernelOracle::grad_at(double x, double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("grad_at: t must be positive");
  const double var = 4.0 * a_ * t;
  const double norm = 1.0 / std::sqrt(M_PI * var);
  const long n = static_cast<long>(wm_.size());
  double sum = 0.0;
  for (long i = 0; i < n; ++i) {
    const double z = x - (h0_ + dh_ * static_cast<double>(i));
    sum += wm_[i] * std::exp(-z * z / var);
  }
  return sum * norm;
}

}  // namespace cw
