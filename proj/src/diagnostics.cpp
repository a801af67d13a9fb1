#include "contactwave/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "contactwave/errors.hpp"

namespace cw {

double phi_entropy(double z) {
  if (!(z > 0.0)) throw std::domain_error("phi_entropy: z must be positive");
  return z - std::log(z) - 1.0;
}

double psi_entropy(double z) {
  if (!(z > 0.0)) throw std::domain_error("psi_entropy: z must be positive");
  return 1.0 / z + std::log(z) - 1.0;
}

PertNorms norms(const Perturbation& pert, const Grid& grid) {
  const double dx = grid.dx();
  PertNorms out;
  out.l2_sq = l2_sq(pert.phi, dx) + l2_sq(pert.psi, dx) + l2_sq(pert.zeta, dx);
  out.h1_sq = out.l2_sq + l2_sq(d1(pert.phi, dx), dx) + l2_sq(d1(pert.psi, dx), dx) +
              l2_sq(d1(pert.zeta, dx), dx);
  out.linf = std::max({sup_abs(pert.phi), sup_abs(pert.psi), sup_abs(pert.zeta)});
  return out;
}

double relative_entropy(const FlowField& state, const ProfileField& profile, const PhysParams& p,
                        const Grid& grid) {
  const Array rv = state.v / profile.V;
  const Array rt = state.theta / profile.Theta;
  if ((rv <= 0.0).any() || (rt <= 0.0).any())
    throw std::domain_error("relative_entropy: nonpositive ratio");
  const Array psi = state.u - profile.U;
  const Array integrand = p.R * profile.Theta * (rv - rv.log() - 1.0) + 0.5 * psi.square() +
                          p.Cv() * profile.Theta * (rt - rt.log() - 1.0);
  return trapezoid(integrand, grid.dx());
}

void DecaySeries::push(double time, double val) {
  if (!t.empty() && time <= t.back())
    throw std::invalid_argument("DecaySeries: times must be strictly increasing");
  if (!std::isfinite(val) || val < 0.0)
    throw std::invalid_argument("DecaySeries: values must be finite and nonnegative");
  t.push_back(time);
  value.push_back(val);
}

FitResult fit_power_law(const DecaySeries& series, double t_lo, double t_hi) {
  std::vector<double> xs, ys;
  for (size_t i = 0; i < series.t.size(); ++i) {
    if (series.t[i] < t_lo || series.t[i] > t_hi) continue;
    if (!(series.value[i] > 0.0))
      throw NonpositiveValue("fit_power_law: nonpositive value at t=" +
                             std::to_string(series.t[i]));
    xs.push_back(std::log1p(series.t[i]));
    ys.push_back(std::log(series.value[i]));
  }
  const int n = static_cast<int>(xs.size());
  if (n < 8)
    throw InsufficientData("fit_power_law: " + std::to_string(n) + " samples in window, need 8");
  double sx = 0, sy = 0;
  for (int i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  FitResult fit;
  fit.exponent = (sxx > 0.0) ? sxy / sxx : 0.0;
  fit.log_constant = my - fit.exponent * mx;
  double rss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.log_constant + fit.exponent * xs[i]);
    rss += r * r;
  }
  fit.rms_residual = std::sqrt(rss / n);
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.n_used = n;
  return fit;
}

ProfileDiag profile_diag(const ProfileField& field, const PhysParams& p, const Grid& grid) {
  const double dx = grid.dx();
  ProfileDiag d;
  d.t = field.t;
  const Array lth = field.Theta.log();
  d.theta_x_sq = l2_sq(field.Theta_x, dx);
  d.ln_x_sq = l2_sq(d1(lth, dx), dx);
  d.ln_xx_sq = l2_sq(field.lnTheta_xx, dx);
  d.ln_xxx_sq = l2_sq(field.lnTheta_xxx, dx);
  const int mid = (grid.n - 1) / 2;
  const double gl = (field.Theta.head(mid + 1) - p.theta_minus).abs().maxCoeff();
  const double gr = (field.Theta.tail(grid.n - mid) - p.theta_plus).abs().maxCoeff();
  const double g = std::max(gl, gr);
  d.far_gap_linf_sq = g * g;
  d.f_sq = l2_sq(field.F, dx);
  d.g_sq = l2_sq(field.G, dx);
  double ratio = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    const double tx = std::abs(field.Theta_x(j));
    if (tx < 1e-13) continue;
    ratio = std::max(ratio, (std::abs(field.V_x(j)) + std::abs(field.U(j))) / tx);
  }
  d.grad_ratio_sup = ratio;
  return d;
}

std::map<std::string, DecaySeries> profile_decay_suite(const std::vector<ProfileDiag>& diags) {
  std::map<std::string, DecaySeries> out;
  auto& lx = out["ln_theta_x_sq"];
  auto& lxx = out["ln_theta_xx_sq"];
  auto& lxxx = out["ln_theta_xxx_sq"];
  auto& tx = out["theta_x_sq"];
  auto& gap = out["far_field_gap_linf_sq"];
  auto& fs = out["forcing_f_sq"];
  auto& gs = out["forcing_g_sq"];
  auto& ix = out["int_ln_theta_x_sq"];
  auto& ixx = out["int_ln_theta_xx_sq"];
  auto& w = out["weighted_ln_theta_xx_sq"];
  for (const auto& d : diags) {
    lx.push(d.t, d.ln_x_sq);
    lxx.push(d.t, d.ln_xx_sq);
    lxxx.push(d.t, d.ln_xxx_sq);
    tx.push(d.t, d.theta_x_sq);
    gap.push(d.t, d.far_gap_linf_sq);
    fs.push(d.t, d.f_sq);
    gs.push(d.t, d.g_sq);
    ix.push(d.t, d.int_ln_x_sq);
    ixx.push(d.t, d.int_ln_xx_sq);
    w.push(d.t, (1.0 + d.t) * d.ln_xx_sq);
  }
  return out;
}

EnergyRates energy_rates(const Perturbation& pert, const FlowField& state,
                         const ProfileField& profile, const Grid& grid) {
  const double dx = grid.dx();
  const Array psi_x = d1(pert.psi, dx);
  const Array zeta_x = d1(pert.zeta, dx);
  const Array phi_x = d1(pert.phi, dx);
  const Array psi_xx = d2(pert.psi, dx);
  const Array zeta_xx = d2(pert.zeta, dx);
  EnergyRates r;
  r.second_deriv = l2_sq(psi_xx, dx) + l2_sq(zeta_xx, dx);
  r.dissipation =
      l2_sq(phi_x, dx) + l2_sq(psi_x, dx) + l2_sq(zeta_x, dx) + r.second_deriv;
  r.weighted_theta_x =
      trapezoid(profile.Theta_x.square() * (pert.phi.square() + pert.zeta.square()), dx);
  r.source_budget = trapezoid((profile.F * pert.psi).abs() +
                                  (profile.G * pert.zeta / state.theta).abs(),
                              dx);
  return r;
}

AprioriReport apriori_monitor(const std::vector<EnergyReport>& history) {
  AprioriReport rep;
  if (history.empty()) return rep;
  for (const auto& e : history) {
    rep.sup_h1_sq = std::max(rep.sup_h1_sq, e.h1_sq);
    rep.linf_peak = std::max(rep.linf_peak, e.linf);
  }
  rep.final_dissipation = history.back().dissipation_accum;
  rep.ratio = (rep.sup_h1_sq + rep.final_dissipation) / (history.front().h1_sq + 1.0);
  const double t_final = history.back().t;
  const double t_q = 0.75 * t_final;
  double d_q = 0.0;
  for (const auto& e : history)
    if (e.t <= t_q) d_q = e.dissipation_accum;
  const double total = rep.final_dissipation;
  rep.late_increment_fraction = total > 0.0 ? (total - d_q) / total : 0.0;
  rep.linf_final_over_peak =
      rep.linf_peak > 0.0 ? history.back().linf / rep.linf_peak : 0.0;
  return rep;
}

bool no_sustained_growth(const std::vector<EnergyReport>& history, double window,
                         double tol_factor) {
  const size_t n = history.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (history[j].t - history[i].t < window) continue;
      if (history[j].linf > tol_factor * history[i].linf + 1e-300) return false;
    }
  }
  return true;
}

}  // namespace cw
