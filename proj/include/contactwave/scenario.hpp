#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "contactwave/flow.hpp"
#include "contactwave/params.hpp"

namespace cw {

enum class ScenarioKind {
  stationary,
  profile_only,
  linear_oracle,
  perturbed_wave,
  amplitude_sweep,
  delta0_sweep,
  rate_study,
  residual_check,
};

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from(const std::string& name);  // throws std::invalid_argument

/// Mesh request; "auto" sizes the half width from the run so that the
/// diffusive spread and (for flow runs) the acoustic cone stay well inside
/// the domain, and picks N from a per-scenario dx target.
struct GridSpec {
  bool auto_half_width = true;
  double half_width = 0.0;
  bool auto_n = true;
  int n = 0;
  int refine = 0;           // N -> (N-1)*2^refine + 1
  double dx_target = 0.0;   // 0 = scenario default
};

/// Geometric output times t0 * ratio^k, preceded by t = 0 and clipped to the
/// final time (which is always included).
struct Cadence {
  double t0 = 0.25;
  double ratio = 1.25;
};
std::vector<double> output_times(const Cadence& c, double t_final);

struct Scenario {
  ScenarioKind kind = ScenarioKind::perturbed_wave;
  PhysParams params;
  GridSpec grid;
  double t_final = 160.0;
  Cadence cadence;
  InitialData init;
  std::uint64_t seed = 0;
  int snapshot_every = 0;  // write every k-th output as a snapshot (0 = none)

  // profile_only extras
  bool tune_mu_zero_forcing = false;
  bool with_flow = false;

  // sweep extras
  std::vector<int> delta0_inverses{9, 17, 33};
  std::vector<double> amplitudes{0.0125, 0.025, 0.05, 0.1};
  double sweep_t_final = 50.0;

  // linear_oracle extras: nonlinear-vs-linear gap measurement
  std::vector<double> gap_amplitudes{1e-3, 1e-4};
  double gap_time = 10.0;

  // fit window; 0 = default [10, t_final / 3]
  double fit_t_lo = 0.0;
  double fit_t_hi = 0.0;

  // resource budget: a run exceeding this many accepted steps (profile plus
  // flow) is reported as failed rather than left to spin
  long long max_steps = 50'000'000;
};

/// Tuned default scenario per kind (the presets behind the CLI and the
/// acceptance suite).
Scenario default_scenario(ScenarioKind kind);

Grid resolve_grid(const Scenario& s);

}  // namespace cw
