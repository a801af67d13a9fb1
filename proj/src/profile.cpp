#include "contactwave/profile.hpp"

#include <cmath>
#include <limits>

#include "contactwave/errors.hpp"

namespace cw {

double k_map(double x) {
  if (x < 0.0) return -k_map(-x);
  return std::log(x + std::sqrt(1.0 + x * x));
}

namespace {

// Precomputed constants of the initial profile. H(x) = Theta0^{1/delta0} is
// kept away from cancellation by always adding the erfc correction to the
// nearer far-field value.
struct Theta0Eval {
  double h_minus, h_plus, diff, delta0;
  bool degenerate;

  explicit Theta0Eval(const PhysParams& p)
      : h_minus(std::pow(p.theta_minus, static_cast<double>(p.delta0_inverse))),
        h_plus(std::pow(p.theta_plus, static_cast<double>(p.delta0_inverse))),
        diff(h_plus - h_minus),
        delta0(p.delta0()),
        degenerate(p.theta_minus == p.theta_plus) {}

  double h(double K) const {
    if (K <= 0.0) return h_minus + 0.5 * diff * std::erfc(-K);
    return h_plus - 0.5 * diff * std::erfc(K);
  }

  double value(double x) const {
    if (degenerate) return std::exp(delta0 * std::log(h_plus));
    const double H = h(k_map(x));
    return std::exp(delta0 * std::log(H));
  }

  // Theta0_x = delta0 * H^{delta0-1} * H_x, H_x = diff * K_x * exp(-K^2)/sqrt(pi)
  double derivative(double x) const {
    if (degenerate) return 0.0;
    const double K = k_map(x);
    const double H = h(K);
    const double kx = 1.0 / std::sqrt(1.0 + x * x);
    const double hx = diff * kx * std::exp(-K * K) / std::sqrt(M_PI);
    return delta0 * std::exp((delta0 - 1.0) * std::log(H)) * hx;
  }
};

}  // namespace

double theta0(double x, const PhysParams& p) {
  if (p.theta_minus == p.theta_plus) return p.theta_plus;
  return Theta0Eval(p).value(x);
}

double theta0_x(double x, const PhysParams& p) { return Theta0Eval(p).derivative(x); }

std::function<double(double)> theta0_function(const PhysParams& p) {
  return [eval = Theta0Eval(p)](double x) { return eval.value(x); };
}

std::function<double(double)> theta0_x_function(const PhysParams& p) {
  return [eval = Theta0Eval(p)](double x) { return eval.derivative(x); };
}

Array theta0_on_grid(const Grid& grid, const PhysParams& p) {
  const Theta0Eval eval(p);
  Array out(grid.n);
  if (eval.degenerate) {
    out.setConstant(p.theta_plus);
    return out;
  }
  for (int j = 0; j < grid.n; ++j) out(j) = eval.value(grid.x(j));
  // pin the far-field nodes to the exact limits
  out(0) = p.theta_minus;
  out(grid.n - 1) = p.theta_plus;
  return out;
}

namespace {

struct BoundValues {
  double vals[6];
};

BoundValues measure_theta0(const PhysParams& p, const Grid& grid) {
  const double dx = grid.dx();
  const Array th = theta0_on_grid(grid, p);
  const Array thx = d1(th, dx);
  const Array lth = th.log();
  const Array l2d = d2(lth, dx);
  const Array l3d = d3(lth, dx);

  BoundValues b{};
  b.vals[0] = trapezoid(thx.abs(), dx);
  // half-line gaps; with an odd node count x = 0 is a node shared by both
  const int mid = (grid.n - 1) / 2;
  const Array gap_left = (th.head(mid + 1) - p.theta_minus).abs();
  const Array gap_right = (th.tail(grid.n - mid) - p.theta_plus).abs();
  b.vals[1] = trapezoid(gap_left, dx) + trapezoid(gap_right, dx);
  b.vals[2] = sup_abs(thx);
  b.vals[3] = l2_sq(thx, dx);
  b.vals[4] = l2_sq(l2d, dx);
  b.vals[5] = l2_sq(l3d, dx);
  return b;
}

}  // namespace

BoundReport verify_theta0_bounds(const PhysParams& p, const Grid& grid) {
  const BoundValues coarse = measure_theta0(p, grid);
  const Grid fine{grid.half_width, 2 * (grid.n - 1) + 1};
  const BoundValues refined = measure_theta0(p, fine);

  double max_change = 0.0;
  for (int i = 0; i < 6; ++i) {
    const double scale = std::max({std::abs(coarse.vals[i]), std::abs(refined.vals[i]), 1e-300});
    const double change = std::abs(coarse.vals[i] - refined.vals[i]) / scale;
    // identically-zero quantities (degenerate wave) report zero change
    if (std::abs(coarse.vals[i]) == 0.0 && std::abs(refined.vals[i]) == 0.0) continue;
    max_change = std::max(max_change, change);
  }
  if (max_change > 0.05)
    throw GridTooCoarse("verify_theta0_bounds: refining dx by 2 changes a reported value by " +
                        std::to_string(max_change * 100.0) + "%");

  BoundReport r;
  r.l1_theta0_x = coarse.vals[0];
  r.l1_far_gap = coarse.vals[1];
  r.sup_theta0_x = coarse.vals[2];
  r.l2sq_theta0_x = coarse.vals[3];
  r.l2sq_ln_theta0_xx = coarse.vals[4];
  r.l2sq_ln_theta0_xxx = coarse.vals[5];
  r.max_refine_change = max_change;
  return r;
}

double forcing_coefficient(const PhysParams& p) {
  return p.kappa * (p.gamma - 1.0) / (p.gamma * p.R) * (p.a() - p.mu * p.p_plus() / p.R);
}

void profile_from_theta(ProfileField& field, const PhysParams& p, const Grid& grid) {
  const double dx = grid.dx();
  if ((field.Theta <= 0.0).any()) throw std::domain_error("profile_from_theta: Theta must be positive");
  const double cu = p.kappa * (p.gamma - 1.0) / (p.gamma * p.R);
  field.Theta_x = d1(field.Theta, dx);
  const Array lth = field.Theta.log();
  field.lnTheta_xx = d2(lth, dx);
  field.lnTheta_xxx = d3(lth, dx);
  field.V = (p.R / p.p_plus()) * field.Theta;
  field.V_x = (p.R / p.p_plus()) * field.Theta_x;
  field.U = cu * field.Theta_x / field.Theta;
  field.U_x = d1(field.U, dx);
}

void source_terms(ProfileField& field, const PhysParams& p, const Grid& grid) {
  const double dx = grid.dx();
  field.F = forcing_coefficient(p) * d1(field.lnTheta_xx / field.Theta, dx);
  field.G = -p.mu * field.U_x.square() / field.V;
}

ProfileField make_profile0(const PhysParams& p, const Grid& grid) {
  ProfileField f;
  f.t = 0.0;
  f.Theta = theta0_on_grid(grid, p);
  profile_from_theta(f, p, grid);
  source_terms(f, p, grid);
  return f;
}

namespace {

// RHS of Theta_t = a (ln Theta)_xx with pinned ends, plus the boundary flux
// rate a * [(ln Theta)_x]_{-L}^{+L} in its exact telescoped form.
struct DiffusionRhs {
  Array k;
  double boundary_flux_rate;
  double ln_x_sq;
  double ln_xx_sq;
};

DiffusionRhs log_diffusion_rhs(const Array& theta, double a, double dx, bool with_norms) {
  const Eigen::Index n = theta.size();
  const Array g = theta.log();
  DiffusionRhs out;
  out.k = Array::Zero(n);
  out.k.segment(1, n - 2) =
      a * (g.segment(2, n - 2) - 2.0 * g.segment(1, n - 2) + g.segment(0, n - 2)) / (dx * dx);
  out.boundary_flux_rate = a * ((g(n - 1) - g(n - 2)) - (g(1) - g(0))) / dx;
  if (with_norms) {
    out.ln_x_sq = l2_sq(d1(g, dx), dx);
    out.ln_xx_sq = l2_sq(d2(g, dx), dx);
  } else {
    out.ln_x_sq = out.ln_xx_sq = 0.0;
  }
  return out;
}

void check_admissible(const Array& theta) {
  if (!theta.isFinite().all() || (theta <= 0.0).any())
    throw StepRejected("theta lost positivity or finiteness");
}

}  // namespace

ProfileField evolve_theta(const ProfileField& field, double dt, const PhysParams& p,
                          const Grid& grid) {
  const double dx = grid.dx();
  const double a = p.a();
  const DiffusionRhs s1 = log_diffusion_rhs(field.Theta, a, dx, false);
  Array stage = field.Theta + dt * s1.k;
  check_admissible(stage);
  const DiffusionRhs s2 = log_diffusion_rhs(stage, a, dx, false);
  ProfileField out;
  out.t = field.t + dt;
  out.Theta = field.Theta + 0.5 * dt * (s1.k + s2.k);
  check_admissible(out.Theta);
  profile_from_theta(out, p, grid);
  source_terms(out, p, grid);
  return out;
}

ProfileStepper::ProfileStepper(const PhysParams& p, const Grid& grid)
    : ProfileStepper(p, grid, theta0_on_grid(grid, p), 0.0) {}

ProfileStepper::ProfileStepper(const PhysParams& p, const Grid& grid, Array theta_init, double t0)
    : p_(p), grid_(grid), theta_(std::move(theta_init)), t_(t0) {
  check_admissible(theta_);
  mass0_ = trapezoid(theta_, grid_.dx());
  min_theta_seen_ = theta_.minCoeff();
}

double ProfileStepper::dt_cap() const {
  const double dx = grid_.dx();
  return 0.4 * dx * dx * theta_.minCoeff() / p_.a();
}

void ProfileStepper::advance_to(double t_target) {
  if (t_target <= t_) return;
  const double dx = grid_.dx();
  const double a = p_.a();
  const double eps = 1e-12 * std::max(1.0, std::abs(t_target));
  // RHS of the current state doubles as stage 1 of the next step
  DiffusionRhs cur = log_diffusion_rhs(theta_, a, dx, true);
  while (t_target - t_ > eps) {
    double dt = std::min(dt_cap(), t_target - t_);
    const double dt_floor = dt_cap() * std::pow(2.0, -30);
    for (;;) {
      try {
        Array stage = theta_ + dt * cur.k;
        check_admissible(stage);
        const DiffusionRhs s2 = log_diffusion_rhs(stage, a, dx, false);
        Array next = theta_ + 0.5 * dt * (cur.k + s2.k);
        check_admissible(next);
        flux_budget_ += 0.5 * dt * (cur.boundary_flux_rate + s2.boundary_flux_rate);
        theta_.swap(next);
        t_ += dt;
        ++steps_;
        min_theta_seen_ = std::min(min_theta_seen_, theta_.minCoeff());
        // trapezoid-in-time accumulation of the gradient norms
        const DiffusionRhs rn = log_diffusion_rhs(theta_, a, dx, true);
        int_ln_x_sq_ += 0.5 * dt * (cur.ln_x_sq + rn.ln_x_sq);
        int_ln_xx_sq_ += 0.5 * dt * (cur.ln_xx_sq + rn.ln_xx_sq);
        cur = rn;
        break;
      } catch (const StepRejected&) {
        dt *= 0.5;
        if (dt < dt_floor) throw BlowUp("profile step size collapsed at t=" + std::to_string(t_));
      }
    }
  }
  t_ = t_target;
}

ProfileField ProfileStepper::field() const {
  ProfileField f;
  f.t = t_;
  f.Theta = theta_;
  profile_from_theta(f, p_, grid_);
  source_terms(f, p_, grid_);
  return f;
}

double ProfileStepper::conservation_defect_rel() const {
  const double mass = trapezoid(theta_, grid_.dx());
  const double scale = std::max(std::abs(mass0_), std::abs(mass));
  return std::abs(mass - mass0_ - flux_budget_) / std::max(scale, 1e-300);
}

}  // namespace cw
