#include "contactwave/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "contactwave/errors.hpp"
#include "contactwave/heat_kernel.hpp"
#include "contactwave/perturbation.hpp"

namespace cw {

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::stationary: return "stationary";
    case ScenarioKind::profile_only: return "profile_only";
    case ScenarioKind::linear_oracle: return "linear_oracle";
    case ScenarioKind::perturbed_wave: return "perturbed_wave";
    case ScenarioKind::amplitude_sweep: return "amplitude_sweep";
    case ScenarioKind::delta0_sweep: return "delta0_sweep";
    case ScenarioKind::rate_study: return "rate_study";
    case ScenarioKind::residual_check: return "residual_check";
  }
  return "unknown";
}

ScenarioKind scenario_kind_from(const std::string& name) {
  for (ScenarioKind k :
       {ScenarioKind::stationary, ScenarioKind::profile_only, ScenarioKind::linear_oracle,
        ScenarioKind::perturbed_wave, ScenarioKind::amplitude_sweep, ScenarioKind::delta0_sweep,
        ScenarioKind::rate_study, ScenarioKind::residual_check}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

std::vector<double> output_times(const Cadence& c, double t_final) {
  std::vector<double> ts{0.0};
  for (double t = c.t0; t < t_final * (1.0 - 1e-12); t *= c.ratio) ts.push_back(t);
  ts.push_back(t_final);
  return ts;
}

Scenario default_scenario(ScenarioKind kind) {
  Scenario s;
  s.kind = kind;
  switch (kind) {
    case ScenarioKind::stationary:
      s.params.theta_minus = 1.0;
      s.params.theta_plus = 1.0;
      s.t_final = 10.0;
      s.init.kind = InitialData::Kind::none;
      break;
    case ScenarioKind::profile_only:
      s.t_final = 100.0;
      s.init.kind = InitialData::Kind::none;
      break;
    case ScenarioKind::rate_study:
      s.t_final = 1000.0;
      s.init.kind = InitialData::Kind::none;
      break;
    case ScenarioKind::linear_oracle:
      s.t_final = 1000.0;
      s.init.kind = InitialData::Kind::none;
      break;
    case ScenarioKind::perturbed_wave:
      s.t_final = 160.0;
      s.init.kind = InitialData::Kind::gaussian;
      s.init.amp_zeta = 0.05;
      s.init.width = 1.0;
      break;
    case ScenarioKind::amplitude_sweep:
      s.params.theta_minus = 0.3;
      s.t_final = 50.0;
      s.sweep_t_final = 50.0;
      s.amplitudes = {0.0, 0.0125, 0.025, 0.05, 0.1};
      s.init.kind = InitialData::Kind::gaussian;
      s.init.width = 1.0;
      break;
    case ScenarioKind::delta0_sweep:
      s.t_final = 1.0;
      s.init.kind = InitialData::Kind::none;
      break;
    case ScenarioKind::residual_check:
      s.t_final = 5.0;
      s.init.kind = InitialData::Kind::gaussian;
      s.init.amp_phi = 0.02;
      s.init.amp_psi = 0.03;
      s.init.amp_zeta = 0.05;
      s.init.width = 1.0;
      break;
  }
  return s;
}

namespace {

bool is_flow_kind(ScenarioKind k) {
  return k == ScenarioKind::perturbed_wave || k == ScenarioKind::amplitude_sweep ||
         k == ScenarioKind::residual_check || k == ScenarioKind::stationary;
}

double default_dx(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::stationary: return 0.08;
    case ScenarioKind::profile_only:
    case ScenarioKind::rate_study: return 0.2;
    case ScenarioKind::linear_oracle: return 0.25;
    case ScenarioKind::delta0_sweep: return 0.05;
    case ScenarioKind::residual_check: return 0.1;
    default: return 0.15;
  }
}

// Lagrangian acoustic speed at a far-field state.
double far_speed(const PhysParams& p, double theta, double v) {
  return std::sqrt(p.gamma * p.R * theta) / v;
}

int odd_node_count(double L, double dx) {
  int n_int = static_cast<int>(std::ceil(2.0 * L / dx));
  if (n_int % 2 != 0) ++n_int;
  return std::max(n_int + 1, 65);
}

}  // namespace

Grid resolve_grid(const Scenario& s) {
  const PhysParams& p = s.params;
  double L = s.grid.half_width;
  if (s.grid.auto_half_width) {
    if (s.kind == ScenarioKind::delta0_sweep) {
      L = 200.0;
    } else if (s.kind == ScenarioKind::stationary) {
      L = 10.0;
    } else {
      // diffusive spread of the wave profile
      L = 10.0 * std::sqrt(4.0 * p.a() * s.t_final / p.theta_far_min());
      if (is_flow_kind(s.kind)) {
        // acoustic cone of the perturbation must stay inside the domain
        const double c = std::max(far_speed(p, p.theta_minus, p.v_minus()),
                                  far_speed(p, p.theta_plus, p.v_plus));
        const double reach =
            1.15 * (c * s.t_final + std::abs(s.init.center) + 5.0 * s.init.width + 5.0);
        L = std::max(L, reach);
      }
      L = std::max(L, 20.0);
    }
  }
  int n = s.grid.n;
  if (s.grid.auto_n) {
    const double dx = s.grid.dx_target > 0.0 ? s.grid.dx_target : default_dx(s.kind);
    n = odd_node_count(L, dx);
  }
  for (int k = 0; k < s.grid.refine; ++k) n = 2 * (n - 1) + 1;
  return Grid::make(L, n);
}

bool RunRecord::all_asserted_pass() const {
  if (failed) return false;
  for (const auto& f : flags)
    if (f.asserted && !f.pass) return false;
  return true;
}

const Flag* RunRecord::find_flag(const std::string& name) const {
  for (const auto& f : flags)
    if (f.name == name) return &f;
  return nullptr;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("loglog_slope: need >= 2 points");
  double sx = 0, sy = 0;
  std::vector<double> lx(n), ly(n);
  for (size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw NonpositiveValue("loglog_slope: inputs must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  return sxy / sxx;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void add_flag(RunRecord& rec, const std::string& name, const std::string& claim, bool asserted,
              bool pass, double measured, const std::string& detail = "") {
  rec.flags.push_back(Flag{name, claim, asserted, pass, measured, detail});
}

std::pair<double, double> fit_window(const Scenario& s) {
  const double lo = s.fit_t_lo > 0.0 ? s.fit_t_lo : 10.0;
  const double hi = s.fit_t_hi > 0.0 ? s.fit_t_hi : s.t_final / 3.0;
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// perturbed runs: profile + flow co-advance with energy bookkeeping

struct CoRunResult {
  std::vector<EnergyReport> energy;
  FlowAudit audit;
  double mass_defect = 0.0, momentum_defect = 0.0, energy_defect = 0.0;
  double e0 = 0.0;  // relative entropy at t = 0
  std::vector<SnapshotRecord> snapshots;
};

CoRunResult co_run(const Scenario& s, const Grid& grid, std::vector<double> times) {
  const PhysParams& p = s.params;
  ProfileStepper profile(p, grid);
  FlowStepper flow(make_initial(profile.field(), s.init, grid), p, grid);

  CoRunResult out;
  EnergyRates prev_rates{};
  double prev_t = 0.0;
  int idx = 0;
  for (double t : times) {
    profile.advance_to(t);
    flow.advance_to(t);
    if (profile.steps_taken() + flow.steps_taken() > s.max_steps)
      throw BlowUp("step budget exhausted at t=" + std::to_string(t));
    const ProfileField pf = profile.field();
    const FlowField& st = flow.state();
    const Perturbation pert = perturbation_of(st, pf);
    const PertNorms nm = norms(pert, grid);
    const EnergyRates rates = energy_rates(pert, st, pf, grid);
    EnergyReport e;
    e.t = t;
    e.l2_sq = nm.l2_sq;
    e.h1_sq = nm.h1_sq;
    e.linf = nm.linf;
    e.rel_entropy = relative_entropy(st, pf, p, grid);
    if (!out.energy.empty()) {
      const EnergyReport& last = out.energy.back();
      const double dt = t - prev_t;
      e.dissipation_accum = last.dissipation_accum + 0.5 * dt * (prev_rates.dissipation + rates.dissipation);
      e.second_deriv_dissipation =
          last.second_deriv_dissipation + 0.5 * dt * (prev_rates.second_deriv + rates.second_deriv);
      e.weighted_theta_x_accum = last.weighted_theta_x_accum +
                                 0.5 * dt * (prev_rates.weighted_theta_x + rates.weighted_theta_x);
      e.source_budget_accum =
          last.source_budget_accum + 0.5 * dt * (prev_rates.source_budget + rates.source_budget);
    } else {
      out.e0 = e.rel_entropy;
    }
    out.energy.push_back(e);
    if (s.snapshot_every > 0 && idx % s.snapshot_every == 0)
      out.snapshots.push_back(SnapshotRecord{st, pf});
    prev_rates = rates;
    prev_t = t;
    ++idx;
  }
  out.audit = flow.audit();
  out.mass_defect = flow.mass_defect_rel();
  out.momentum_defect = flow.momentum_defect_rel();
  out.energy_defect = flow.energy_defect_rel();
  return out;
}

void add_conservation_flags(RunRecord& rec, double max_step_mass_defect, double mass_defect,
                            double momentum_defect, double energy_defect, double t_final) {
  add_flag(rec, "mass_identity_per_step",
           "per-step change of the volume sum equals the staged boundary flux of u", true,
           max_step_mass_defect <= 1e-13, max_step_mass_defect);
  rec.audits["mass_defect_rel"] = mass_defect;
  const double mom = momentum_defect / std::max(t_final, 1e-300);
  add_flag(rec, "momentum_budget_closure",
           "momentum changes only by boundary fluxes, closure per unit time", true, mom <= 1e-8,
           mom);
  const double en = energy_defect / std::max(t_final, 1e-300);
  add_flag(rec, "energy_budget_closure",
           "total energy changes only by boundary heat/work fluxes, closure per unit time", true,
           en <= 1e-8, en);
}

// ---------------------------------------------------------------------------

RunRecord run_stationary(const Scenario& s) {
  RunRecord rec;
  rec.scenario = s;
  const Grid grid = resolve_grid(s);
  rec.grid = grid;
  const PhysParams& p = s.params;
  ProfileField pf = make_profile0(p, grid);
  FlowStepper flow(make_initial(pf, s.init, grid), p, grid);

  double worst = 0.0;
  const long long chunk = 1000, total = 10000;
  for (long long done = 0; done < total; done += chunk) {
    flow.advance_steps(chunk);
    pf.t = flow.t();
    const Perturbation pert = perturbation_of(flow.state(), pf);
    const PertNorms nm = norms(pert, grid);
    worst = std::max({worst, nm.l2_sq, nm.h1_sq, nm.linf});
    EnergyReport e;
    e.t = flow.t();
    e.l2_sq = nm.l2_sq;
    e.h1_sq = nm.h1_sq;
    e.linf = nm.linf;
    e.rel_entropy = relative_entropy(flow.state(), pf, p, grid);
    rec.energy.push_back(e);
  }
  add_flag(rec, "stationary_fixed_point",
           "constant far-field state stays fixed: perturbation norms stay below 1e-12 over 1e4 steps",
           true, worst <= 1e-12, worst);
  add_conservation_flags(rec, flow.audit().max_step_mass_defect_rel, flow.mass_defect_rel(),
                         flow.momentum_defect_rel(), flow.energy_defect_rel(), flow.t());
  auto& a = rec.audits;
  a["steps"] = static_cast<double>(flow.steps_taken());
  a["final_t"] = flow.t();
  return rec;
}

// shared core for profile_only and rate_study
struct ProfileRunOutput {
  std::vector<ProfileDiag> diags;
  double conservation_defect = 0.0;
  double min_theta = 0.0;
  bool monotone = true;
  bool grad_norm_monotone = true;
};

ProfileRunOutput profile_run_core(const PhysParams& p, const Grid& grid, const Scenario& s) {
  ProfileStepper stepper(p, grid);
  ProfileRunOutput out;
  const double jump = std::abs(p.theta_plus - p.theta_minus);
  const bool increasing = p.theta_plus >= p.theta_minus;
  double prev_ln_x_sq = -1.0;
  for (double t : output_times(s.cadence, s.t_final)) {
    stepper.advance_to(t);
    if (stepper.steps_taken() > s.max_steps)
      throw BlowUp("step budget exhausted at t=" + std::to_string(t));
    ProfileField f = stepper.field();
    ProfileDiag d = profile_diag(f, p, grid);
    d.int_ln_x_sq = stepper.int_ln_x_sq();
    d.int_ln_xx_sq = stepper.int_ln_xx_sq();
    out.diags.push_back(d);
    // discrete monotonicity in x
    const Array& th = f.Theta;
    for (int j = 1; j < grid.n; ++j) {
      const double step = increasing ? th(j) - th(j - 1) : th(j - 1) - th(j);
      if (step < -1e-12 * std::max(jump, 1e-6)) {
        out.monotone = false;
        break;
      }
    }
    // gradient norm monotone decay after t >= 1
    if (t >= 1.0) {
      if (prev_ln_x_sq >= 0.0 && d.ln_x_sq > prev_ln_x_sq * (1.0 + 1e-10))
        out.grad_norm_monotone = false;
      prev_ln_x_sq = d.ln_x_sq;
    }
  }
  out.conservation_defect = stepper.conservation_defect_rel();
  out.min_theta = stepper.min_theta_seen();
  return out;
}

void add_profile_flags(RunRecord& rec, const ProfileRunOutput& run, const PhysParams& p) {
  add_flag(rec, "profile_positivity", "evolved profile temperature stays strictly positive", true,
           run.min_theta > 0.0, run.min_theta);
  add_flag(rec, "profile_monotone_in_x",
           "monotone initial profile stays monotone at every output time", true, run.monotone,
           run.monotone ? 1.0 : 0.0);
  add_flag(rec, "profile_flux_conservation",
           "change of the temperature integral equals the boundary flux of a (ln T)_x within 1e-6",
           true, run.conservation_defect <= 1e-6, run.conservation_defect);
  add_flag(rec, "profile_grad_norm_monotone",
           "squared L2 of grad log temperature is non-increasing past t = 1", true,
           run.grad_norm_monotone, run.grad_norm_monotone ? 1.0 : 0.0);
  const auto& last = run.diags.back();
  add_flag(rec, "profile_grad_comparison_sup",
           "sup of (|V_x| + |U|) / |T_x| stays bounded by R/p_plus + coeff/theta_min", false, true,
           last.grad_ratio_sup);
  (void)p;
}

void add_profile_fits(RunRecord& rec, const Scenario& s) {
  const auto [lo, hi] = fit_window(s);
  const char* keys[] = {"ln_theta_x_sq", "ln_theta_xx_sq", "ln_theta_xxx_sq",
                        "far_field_gap_linf_sq", "forcing_f_sq", "forcing_g_sq"};
  for (const char* k : keys) {
    const auto it = rec.series.find(k);
    if (it == rec.series.end()) continue;
    try {
      rec.fits[k] = fit_power_law(it->second, lo, hi);
    } catch (const std::exception&) {
      // degenerate series (all zero) carry no fit
    }
  }
}

RunRecord run_profile_only(const Scenario& s) {
  RunRecord rec;
  rec.scenario = s;
  PhysParams p = s.params;
  if (s.tune_mu_zero_forcing) p.mu = p.mu_zero_forcing();
  const Grid grid = resolve_grid(s);
  rec.grid = grid;

  const ProfileRunOutput run = profile_run_core(p, grid, s);
  rec.series = profile_decay_suite(run.diags);
  add_profile_fits(rec, s);
  add_profile_flags(rec, run, p);

  // convergence of the running curvature integral
  const auto& ixx = rec.series.at("int_ln_theta_xx_sq");
  double at_three_quarters = 0.0;
  for (size_t i = 0; i < ixx.t.size(); ++i)
    if (ixx.t[i] <= 0.75 * s.t_final) at_three_quarters = ixx.value[i];
  const double total = ixx.value.back();
  const double tail_fraction = total > 0.0 ? (total - at_three_quarters) / total : 0.0;
  add_flag(rec, "profile_curvature_integral_tail",
           "running integral of the squared curvature norm gains little in the last quarter",
           false, tail_fraction <= 0.05, tail_fraction);

  if (s.with_flow) {
    Scenario sf = s;
    sf.params = p;
    sf.init = InitialData{};  // zero perturbation: response is forced by the defects
    const auto flow = co_run(sf, grid, output_times(s.cadence, s.t_final));
    rec.energy = flow.energy;
    double sup_g = 0.0;
    {
      ProfileField f0 = make_profile0(p, grid);
      sup_g = sup_abs(f0.G);
    }
    const double response = flow.energy.back().linf;
    const double bound = sup_g * s.t_final;
    const double c_measured = bound > 0.0 ? response / bound : 0.0;
    add_flag(rec, "forced_response_bound",
             "flow started on the exact profile stays within C * sup|G| * T of it", true,
             c_measured <= 1.0 && response < 0.1, c_measured,
             "response=" + fmt(response) + " sup|G|*T=" + fmt(bound));
    add_conservation_flags(rec, flow.audit.max_step_mass_defect_rel, flow.mass_defect,
                           flow.momentum_defect, flow.energy_defect, s.t_final);
  }
  return rec;
}

RunRecord run_rate_study(const Scenario& s) {
  RunRecord rec = run_profile_only(s);

  struct FloorSpec {
    const char* series;
    const char* flag;
    double floor;
    double reference;
  };
  const FloorSpec floors[] = {
      {"ln_theta_x_sq", "profile_grad_decay_floor", -0.4, -2.0 / 3.0},
      {"ln_theta_xx_sq", "profile_curvature_decay_floor", -1.2, -5.0 / 3.0},
      {"ln_theta_xxx_sq", "profile_third_deriv_decay_floor", -2.0, -8.0 / 3.0},
  };
  for (const auto& fs : floors) {
    const auto it = rec.fits.find(fs.series);
    const bool have = it != rec.fits.end();
    const double expo = have ? it->second.exponent : 0.0;
    add_flag(rec, fs.flag,
             std::string("fitted decay exponent of ") + fs.series + " is at most " +
                 fmt(fs.floor),
             true, have && expo <= fs.floor, expo,
             "reference exponent " + fmt(fs.reference) + ", rms " +
                 (have ? fmt(it->second.rms_residual) : std::string("n/a")));
  }

  // linear control column: exact-solution gradient norm series and its fit
  {
    const HeatKernelOracle oracle(s.params);
    DecaySeries ctrl;
    for (double t = 10.0; t <= 1000.0 * (1.0 + 1e-12); t *= s.cadence.ratio)
      ctrl.push(t, oracle.grad_l2_sq(t));
    rec.series["theta2_grad_l2_sq"] = ctrl;
    const FitResult fit = fit_power_law(ctrl, 10.0, 1000.0);
    rec.fits["theta2_grad_l2_sq"] = fit;
    add_flag(rec, "linear_control_exponent",
             "heat-kernel control: gradient norm decays with exponent -0.5 within 0.05", true,
             std::abs(fit.exponent + 0.5) <= 0.05, fit.exponent);
  }

  // hoist the curvature-integral tail to an asserted flag at this horizon
  for (auto& f : rec.flags) {
    if (f.name == "profile_curvature_integral_tail") {
      f.asserted = true;
      f.name = "curvature_integral_converged";
      f.pass = f.measured <= 0.05;
    }
  }
  // far-field sup gap exponent is informational (too slow to resolve here)
  if (rec.fits.count("far_field_gap_linf_sq")) {
    add_flag(rec, "far_field_gap_exponent",
             "sup-norm gap to the far fields: measured exponent (informational)", false, true,
             rec.fits.at("far_field_gap_linf_sq").exponent);
  } else {
    add_flag(rec, "far_field_gap_exponent",
             "sup-norm gap to the far fields: measured exponent (informational)", false, true,
             0.0, "series degenerate");
  }
  return rec;
}

RunRecord run_linear_oracle(const Scenario& s) {
  RunRecord rec;
  rec.scenario = s;
  const PhysParams& p = s.params;
  rec.grid = resolve_grid(s);

  // (a) the two quadrature rules agree pointwise
  {
    QuadratureSpec gauss;
    QuadratureSpec simpson;
    simpson.rule = QuadratureSpec::Rule::simpson;
    simpson.initial_panels = 64;
    double worst = 0.0;
    for (double t : {1.0, 10.0, 100.0}) {
      const double g = heat_kernel_theta2(0.0, t, p, gauss);
      const double sv = heat_kernel_theta2(0.0, t, p, simpson);
      worst = std::max(worst, std::abs(g - sv) / std::abs(g));
      DecaySeries& tab = rec.series["theta2_center_dual_rule_gap"];
      tab.push(t, std::abs(g - sv));
    }
    add_flag(rec, "oracle_dual_quadrature_agreement",
             "independent quadrature rules agree on theta2(0, t) to 1e-6 relative", true,
             worst <= 1e-6, worst);
  }

  // (b) control series and fit over [10, 1000]
  const HeatKernelOracle oracle(p);
  {
    DecaySeries ctrl;
    for (double t = 10.0; t <= s.t_final * (1.0 + 1e-12); t *= s.cadence.ratio)
      ctrl.push(t, oracle.grad_l2_sq(t));
    rec.series["theta2_grad_l2_sq"] = ctrl;
    const FitResult fit = fit_power_law(ctrl, 10.0, s.t_final);
    rec.fits["theta2_grad_l2_sq"] = fit;
    add_flag(rec, "linear_gradient_decay_exponent",
             "gradient norm of the linear solution decays with exponent -0.5 within 0.05", true,
             std::abs(fit.exponent + 0.5) <= 0.05, fit.exponent);
  }

  // (c) the lag-correlation norm route agrees with a direct grid quadrature
  {
    double worst = 0.0;
    for (double t : {10.0, 100.0}) {
      const double L = rec.grid.half_width;
      const int n = std::min(rec.grid.n, 4001);
      const double dx = 2.0 * L / (n - 1);
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        const double g = oracle.grad_at(-L + j * dx, t);
        acc += (j == 0 || j == n - 1 ? 0.5 : 1.0) * g * g * dx;
      }
      const double fast = oracle.grad_l2_sq(t);
      worst = std::max(worst, std::abs(fast - acc) / std::abs(fast));
    }
    add_flag(rec, "oracle_norm_route_agreement",
             "correlation route for the gradient norm matches direct quadrature to 1e-4", true,
             worst <= 1e-4, worst);
  }

  // (d) nonlinear-vs-linear gap shrinks quadratically with the wave amplitude
  {
    std::vector<double> rel_gaps;
    for (double amp : s.gap_amplitudes) {
      PhysParams q = p;
      q.theta_plus = 1.0;
      q.theta_minus = 1.0 - amp;
      const Grid g = Grid::make(40.0, 4001);
      ProfileStepper stepper(q, g);
      stepper.advance_to(s.gap_time);
      QuadratureSpec tight;
      tight.rel_tol = 1e-12;
      tight.initial_panels = 64;
      const Array lin = heat_kernel_theta2(g.nodes(), s.gap_time, q, tight);
      const double gap = sup_abs(stepper.theta() - lin);
      rel_gaps.push_back(gap / amp);
    }
    {
      std::vector<std::pair<double, double>> tab_rows;
      for (size_t i = 0; i < s.gap_amplitudes.size(); ++i)
        tab_rows.emplace_back(s.gap_amplitudes[i], rel_gaps[i]);
      std::sort(tab_rows.begin(), tab_rows.end());
      DecaySeries& tab = rec.series["nonlinear_linear_rel_gap"];
      for (const auto& [amp, g] : tab_rows) tab.push(amp, g);
    }
    const double ratio = rel_gaps[1] > 0.0 ? rel_gaps[0] / rel_gaps[1] : 0.0;
    add_flag(rec, "nonlinear_linear_gap_ratio",
             "relative sup gap to the linear solution shrinks at least 5x when the amplitude "
             "shrinks 10x",
             true, ratio >= 5.0, ratio,
             "rel gaps " + fmt(rel_gaps[0]) + " vs " + fmt(rel_gaps[1]));
  }
  return rec;
}

RunRecord run_perturbed_wave(const Scenario& s) {
  RunRecord rec;
  rec.scenario = s;
  const Grid grid = resolve_grid(s);
  rec.grid = grid;

  const auto times = output_times(s.cadence, s.t_final);
  const CoRunResult run = co_run(s, grid, times);
  rec.energy = run.energy;
  rec.snapshots = run.snapshots;

  add_flag(rec, "flow_positivity", "no accepted step loses positivity of v or theta", true,
           run.audit.min_v_seen > 0.0 && run.audit.min_theta_seen > 0.0,
           std::min(run.audit.min_v_seen, run.audit.min_theta_seen));
  add_conservation_flags(rec, run.audit.max_step_mass_defect_rel, run.mass_defect,
                         run.momentum_defect, run.energy_defect, s.t_final);

  const AprioriReport mon = apriori_monitor(run.energy);
  add_flag(rec, "perturbation_linf_decay",
           "sup norm of the perturbation ends below 20% of its peak", true,
           mon.linf_final_over_peak <= 0.20, mon.linf_final_over_peak);
  const bool steady = no_sustained_growth(run.energy, s.t_final / 4.0);
  add_flag(rec, "no_sustained_growth",
           "no growth of the sup norm across any window of a quarter of the run", true, steady,
           steady ? 1.0 : 0.0);

  // uniformity under a 4x horizon extension, read off one trajectory
  {
    const double t_quarter = s.t_final / 4.0;
    double sup_q = 0.0, diss_q = 0.0, used_t = 0.0;
    for (const auto& e : run.energy) {
      if (e.t > t_quarter) break;
      sup_q = std::max(sup_q, e.h1_sq);
      diss_q = e.dissipation_accum;
      used_t = e.t;
    }
    const double q_quarter = sup_q + diss_q;
    const double q_full = mon.sup_h1_sq + mon.final_dissipation;
    const double growth = q_quarter > 0.0 ? (q_full - q_quarter) / q_quarter : 0.0;
    add_flag(rec, "uniform_bound_under_extension",
             "sup H1 plus accumulated dissipation grows at most 10% when the horizon is "
             "extended 4x",
             true, growth <= 0.10, growth, "compared t=" + fmt(used_t) + " vs " + fmt(s.t_final));
  }

  // entropy functional stays below its source budget
  {
    const double e_final = run.energy.back().rel_entropy;
    const double budget = run.energy.back().source_budget_accum;
    const double bound = run.e0 + budget;
    add_flag(rec, "entropy_source_budget",
             "relative entropy at the final time is bounded by its initial value plus the "
             "recorded source budget",
             true, e_final <= bound * (1.0 + 1e-6) + 1e-12, e_final,
             "bound=" + fmt(bound) + " E0=" + fmt(run.e0));
  }

  // quadratic equivalence of the entropy and the squared L2 norm along the run
  {
    double c1 = 1e300, c2 = 0.0;
    for (const auto& e : run.energy) {
      if (e.l2_sq <= 1e-18) continue;
      const double r = e.rel_entropy / e.l2_sq;
      c1 = std::min(c1, r);
      c2 = std::max(c2, r);
    }
    add_flag(rec, "entropy_l2_ratio_range",
             "relative entropy over squared L2 norm stays within a fixed positive band", true,
             c1 > 0.0 && c2 < 1e300 && c2 / c1 <= 4.0, c2 / std::max(c1, 1e-300),
             "c1=" + fmt(c1) + " c2=" + fmt(c2));
    rec.audits["entropy_l2_ratio_lo"] = c1;
    rec.audits["entropy_l2_ratio_hi"] = c2;
  }

  add_flag(rec, "late_dissipation_fraction",
           "share of the dissipation integral gained over the last quarter of the run", false,
           true, mon.late_increment_fraction);

  // weighted integral of Theta_x^2 (phi^2 + zeta^2) against the dissipation
  // integral: a measured ratio, reported only (its constant is unquantified)
  add_flag(rec, "weighted_gradient_ratio",
           "profile-weighted perturbation integral over the dissipation integral plus one", false,
           true,
           run.energy.back().weighted_theta_x_accum /
               (run.energy.back().dissipation_accum + 1.0));

  auto& a = rec.audits;
  a["linf_peak"] = mon.linf_peak;
  a["linf_final_over_peak"] = mon.linf_final_over_peak;
  a["sup_h1_sq"] = mon.sup_h1_sq;
  a["dissipation_final"] = mon.final_dissipation;
  a["apriori_ratio"] = mon.ratio;
  a["momentum_defect_rel"] = run.momentum_defect;
  a["energy_defect_rel"] = run.energy_defect;
  a["max_step_mass_defect_rel"] = run.audit.max_step_mass_defect_rel;
  return rec;
}

RunRecord run_amplitude_sweep(const Scenario& s) {
  RunRecord rec;
  rec.scenario = s;
  rec.grid = resolve_grid(s);

  DecaySeries peak_series, ratio_series, linf_series;
  std::vector<bool> passed;
  // the zero-amplitude run measures the response forced by the profile
  // defects alone; runs at that scale are classified stable by size, since
  // the forced response rises from zero rather than decaying
  double baseline_final = 0.0, baseline_peak = 0.0;
  bool have_baseline = false;
  for (double amp : s.amplitudes) {
    Scenario sub = s;
    sub.kind = ScenarioKind::perturbed_wave;
    sub.t_final = s.sweep_t_final;
    sub.init.kind = InitialData::Kind::gaussian;
    sub.init.amp_zeta = amp;
    const Grid grid = resolve_grid(sub);
    const auto run = co_run(sub, grid, output_times(sub.cadence, sub.t_final));
    const AprioriReport mon = apriori_monitor(run.energy);
    if (!have_baseline && amp == 0.0) {
      baseline_final = run.energy.back().linf;
      baseline_peak = mon.linf_peak;
      have_baseline = true;
    }
    const bool forced_scale = have_baseline && mon.linf_peak <= 3.0 * baseline_peak;
    const bool decayed =
        forced_scale ||
        (run.energy.back().linf <= std::max(0.5 * mon.linf_peak, 2.0 * baseline_final) &&
         no_sustained_growth(run.energy, sub.t_final / 4.0, 1.10));
    passed.push_back(decayed);
    if (amp > 0.0) {
      peak_series.push(amp, mon.sup_h1_sq);
      ratio_series.push(amp, mon.ratio);
      linf_series.push(amp, mon.linf_final_over_peak);
    }
  }
  rec.series["sweep_peak_h1_sq"] = peak_series;
  rec.series["sweep_apriori_ratio"] = ratio_series;
  rec.series["sweep_linf_final_over_peak"] = linf_series;

  bool downward_closed = true;
  for (size_t i = 1; i < passed.size(); ++i)
    if (passed[i] && !passed[i - 1]) downward_closed = false;
  double largest_passing = 0.0;
  for (size_t i = 0; i < passed.size(); ++i)
    if (passed[i]) largest_passing = s.amplitudes[i];
  add_flag(rec, "sweep_pass_set_downward_closed",
           "if an amplitude decays, every smaller amplitude in the sweep decays", true,
           downward_closed, downward_closed ? 1.0 : 0.0);
  add_flag(rec, "sweep_largest_passing_amplitude",
           "largest initial amplitude whose perturbation decays (a measurement)", false, true,
           largest_passing);
  return rec;
}

// || theta0_x ||^2 by Simpson quadrature in K (x = sinh K): grid-free route
// used to extend the scaling table beyond what a truncated mesh resolves.
double theta0_grad_l2sq_kspace(const PhysParams& p) {
  const auto dtheta = theta0_x_function(p);
  const double k_max = 12.0;
  const int m = 24000;
  const double h = 2.0 * k_max / m;
  double acc = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double K = -k_max + i * h;
    const double t = dtheta(std::sinh(K));
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * t * t * std::cosh(K);
  }
  return acc * h / 3.0;
}

RunRecord run_delta0_sweep(const Scenario& s) {
  RunRecord rec;
  rec.scenario = s;
  const Grid grid = resolve_grid(s);
  rec.grid = grid;

  std::vector<int> inverses = s.delta0_inverses;
  std::sort(inverses.begin(), inverses.end());  // ascending inverse = descending delta0
  std::vector<double> delta0s, grad_l2, ln_xx, ln_xxx, sup_grad, l1_vals;
  double worst_l1_gap = 0.0;
  for (int inv : inverses) {
    PhysParams q = s.params;
    q.delta0_inverse = inv;
    q.validate();
    const BoundReport r = verify_theta0_bounds(q, grid);
    const double d0 = q.delta0();
    delta0s.push_back(d0);
    grad_l2.push_back(r.l2sq_theta0_x);
    ln_xx.push_back(r.l2sq_ln_theta0_xx);
    ln_xxx.push_back(r.l2sq_ln_theta0_xxx);
    sup_grad.push_back(r.sup_theta0_x);
    l1_vals.push_back(r.l1_theta0_x);
    worst_l1_gap = std::max(
        worst_l1_gap, std::abs(r.l1_theta0_x - (q.theta_plus - q.theta_minus)));
  }
  // series indexed by delta0 ascending
  {
    DecaySeries a, b, c, d, e;
    for (size_t i = delta0s.size(); i-- > 0;) {
      a.push(delta0s[i], grad_l2[i]);
      b.push(delta0s[i], ln_xx[i]);
      c.push(delta0s[i], ln_xxx[i]);
      d.push(delta0s[i], sup_grad[i]);
      e.push(delta0s[i], l1_vals[i]);
    }
    rec.series["delta0_theta0_x_l2_sq"] = a;
    rec.series["delta0_ln_theta0_xx_l2_sq"] = b;
    rec.series["delta0_ln_theta0_xxx_l2_sq"] = c;
    rec.series["delta0_theta0_x_sup"] = d;
    rec.series["delta0_theta0_x_l1"] = e;
  }

  const double slope_grad = loglog_slope(delta0s, grad_l2);
  const double slope_lnxx = loglog_slope(delta0s, ln_xx);
  const double slope_sup = loglog_slope(delta0s, sup_grad);
  add_flag(rec, "initial_grad_l2_scaling",
           "squared L2 of the initial temperature gradient scales at least like delta0^1.5", true,
           slope_grad >= 1.5, slope_grad, "reference scaling exponent 2");
  // grid-free cross-check of the same slope plus its small-delta0 trend
  {
    std::vector<double> d0s, vals;
    for (int inv : inverses) {
      PhysParams q = s.params;
      q.delta0_inverse = inv;
      d0s.push_back(q.delta0());
      vals.push_back(theta0_grad_l2sq_kspace(q));
    }
    add_flag(rec, "initial_grad_l2_scaling_kspace",
             "same slope from grid-free quadrature of the closed form", false, true,
             loglog_slope(d0s, vals));
    std::vector<double> d0x, valx;
    for (int inv : {33, 65, 129, 257}) {
      PhysParams q = s.params;
      q.delta0_inverse = inv;
      d0x.push_back(q.delta0());
      valx.push_back(theta0_grad_l2sq_kspace(q));
    }
    add_flag(rec, "initial_grad_l2_scaling_asymptotic",
             "gradient-norm slope over 1/33..1/257 approaches the reference exponent 2", false,
             true, loglog_slope(d0x, valx));
  }
  add_flag(rec, "initial_log_curvature_scaling",
           "squared L2 of the initial log-temperature curvature scales at least like delta0^1.5",
           true, slope_lnxx >= 1.5, slope_lnxx, "reference scaling exponent 2");
  add_flag(rec, "initial_grad_sup_scaling",
           "sup of the initial temperature gradient scales about linearly in delta0", false,
           slope_sup >= 0.5 && slope_sup <= 1.5, slope_sup);
  add_flag(rec, "total_variation_equals_jump",
           "L1 norm of the initial gradient equals the temperature jump within 1e-6", true,
           worst_l1_gap <= 1e-6, worst_l1_gap);
  // no growth of the third-derivative norm as delta0 shrinks (values are
  // ordered by ascending inverse, i.e. shrinking delta0)
  double growth = 0.0;
  for (size_t i = 1; i < ln_xxx.size(); ++i) growth = std::max(growth, ln_xxx[i] / ln_xxx[0]);
  add_flag(rec, "third_derivative_no_growth",
           "squared L2 of the third log-derivative grows at most 2x as delta0 shrinks", true,
           growth <= 2.0, growth);
  return rec;
}

RunRecord run_residual_check(const Scenario& s) {
  RunRecord rec;
  rec.scenario = s;
  const Grid base = resolve_grid(s);
  rec.grid = base;

  std::vector<double> dxs, residuals;
  std::vector<FlowField> finals;
  std::vector<Grid> grids;
  double control_residual = 0.0;
  for (int level = 0; level < 3; ++level) {
    Grid grid = base;
    for (int k = 0; k < level; ++k) grid = Grid{grid.half_width, 2 * (grid.n - 1) + 1};
    grids.push_back(grid);
    const PhysParams& p = s.params;
    ProfileStepper profile(p, grid);
    FlowStepper flow(make_initial(profile.field(), s.init, grid), p, grid);
    profile.advance_to(s.t_final);
    flow.advance_to(s.t_final);
    const ProfileField pf_a = profile.field();
    const FlowField st_a = flow.state();
    const double h = flow_dt_cap(flow.state(), p, grid);
    profile.advance_to(s.t_final + h);
    flow.advance_to(s.t_final + h);
    const ProfileField pf_b = profile.field();
    const FlowField st_b = flow.state();
    const Perturbation pa = perturbation_of(st_a, pf_a);
    const Perturbation pb = perturbation_of(st_b, pf_b);
    const ResidualTriple res = perturbation_residual(pa, pb, pf_a, pf_b, p, grid);
    dxs.push_back(grid.dx());
    residuals.push_back(res.l2);
    finals.push_back(st_a);

    if (level == 2) {
      // negative control: a manufactured perturbation that was never evolved
      const Array bump = 0.05 * perturbation_shape(s.init, grid);
      Perturbation ma{pf_a.t, bump, bump, bump};
      Perturbation mb{pf_b.t, bump, bump, bump};
      control_residual = perturbation_residual(ma, mb, pf_a, pf_b, p, grid).l2;
    }
  }

  {
    DecaySeries tab;
    for (size_t i = dxs.size(); i-- > 0;) tab.push(dxs[i], residuals[i]);
    rec.series["residual_vs_dx"] = tab;
  }
  const double order_res = loglog_slope(dxs, residuals);
  add_flag(rec, "residual_convergence_order",
           "discrete residual of the perturbation system converges with order at least 1.8 in dx",
           true, order_res >= 1.8, order_res,
           "residuals " + fmt(residuals[0]) + ", " + fmt(residuals[1]) + ", " + fmt(residuals[2]));

  // full-solver self convergence on shared nodes
  std::vector<double> errs;
  for (int level = 0; level + 1 < 3; ++level) {
    const Grid& gc = grids[level];
    const Grid& gf = grids[level + 1];
    const FlowField& c = finals[level];
    const FlowField& f = finals[level + 1];
    double acc = 0.0;
    for (int j = 0; j < gc.n; ++j) {
      if (std::abs(gc.x(j)) > 0.9 * gc.half_width) continue;
      const int jf = 2 * j;
      (void)gf;
      const double dv = c.v(j) - f.v(jf);
      const double du = c.u(j) - f.u(jf);
      const double dth = c.theta(j) - f.theta(jf);
      acc += (dv * dv + du * du + dth * dth) * gc.dx();
    }
    errs.push_back(std::sqrt(acc));
  }
  const double order_self = std::log2(errs[0] / errs[1]);
  add_flag(rec, "solver_self_convergence_order",
           "full solver self-converges with order at least 1.8 across three grids", true,
           order_self >= 1.8, order_self, "errors " + fmt(errs[0]) + ", " + fmt(errs[1]));

  const double control_ratio = residuals.back() > 0.0 ? control_residual / residuals.back() : 0.0;
  add_flag(rec, "residual_negative_control",
           "a manufactured non-solution shows a residual at least 100x the converged one", true,
           control_ratio >= 100.0, control_ratio);
  return rec;
}

}  // namespace

RunRecord run_scenario(const Scenario& s) {
  try {
    s.params.validate();
    switch (s.kind) {
      case ScenarioKind::stationary: return run_stationary(s);
      case ScenarioKind::profile_only: return run_profile_only(s);
      case ScenarioKind::linear_oracle: return run_linear_oracle(s);
      case ScenarioKind::perturbed_wave: return run_perturbed_wave(s);
      case ScenarioKind::amplitude_sweep: return run_amplitude_sweep(s);
      case ScenarioKind::delta0_sweep: return run_delta0_sweep(s);
      case ScenarioKind::rate_study: return run_rate_study(s);
      case ScenarioKind::residual_check: return run_residual_check(s);
    }
    throw std::logic_error("unhandled scenario kind");
  } catch (const BlowUp& e) {
    RunRecord rec;
    rec.scenario = s;
    rec.failed = true;
    rec.failure = std::string("blow up: ") + e.what();
    return rec;
  } catch (const std::exception& e) {
    RunRecord rec;
    rec.scenario = s;
    rec.failed = true;
    rec.failure = e.what();
    return rec;
  }
}

std::vector<std::string> expected_flags(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::stationary:
      return {"stationary_fixed_point", "mass_identity_per_step", "momentum_budget_closure",
              "energy_budget_closure"};
    case ScenarioKind::profile_only:
      return {"profile_positivity", "profile_monotone_in_x", "profile_flux_conservation",
              "profile_grad_norm_monotone", "profile_grad_comparison_sup",
              "profile_curvature_integral_tail"};
    case ScenarioKind::linear_oracle:
      return {"oracle_dual_quadrature_agreement", "linear_gradient_decay_exponent",
              "oracle_norm_route_agreement", "nonlinear_linear_gap_ratio"};
    case ScenarioKind::perturbed_wave:
      return {"flow_positivity",         "mass_identity_per_step",
              "momentum_budget_closure", "energy_budget_closure",
              "perturbation_linf_decay", "no_sustained_growth",
              "uniform_bound_under_extension", "entropy_source_budget",
              "entropy_l2_ratio_range",  "late_dissipation_fraction",
              "weighted_gradient_ratio"};
    case ScenarioKind::amplitude_sweep:
      return {"sweep_pass_set_downward_closed", "sweep_largest_passing_amplitude"};
    case ScenarioKind::delta0_sweep:
      return {"initial_grad_l2_scaling", "initial_grad_l2_scaling_kspace",
              "initial_grad_l2_scaling_asymptotic", "initial_log_curvature_scaling",
              "initial_grad_sup_scaling", "total_variation_equals_jump",
              "third_derivative_no_growth"};
    case ScenarioKind::rate_study:
      return {"profile_positivity",          "profile_monotone_in_x",
              "profile_flux_conservation",   "profile_grad_norm_monotone",
              "profile_grad_comparison_sup", "profile_grad_decay_floor",
              "profile_curvature_decay_floor", "profile_third_deriv_decay_floor",
              "linear_control_exponent",     "curvature_integral_converged",
              "far_field_gap_exponent"};
    case ScenarioKind::residual_check:
      return {"residual_convergence_order", "solver_self_convergence_order",
              "residual_negative_control"};
  }
  return {};
}

}  // namespace cw
