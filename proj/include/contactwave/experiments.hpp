#pragma once

#include <map>
#include <string>
#include <vector>

#include "contactwave/diagnostics.hpp"
#include "contactwave/scenario.hpp"

namespace cw {

/// One named check with its measured constant. `claim` states in plain
/// language which quantitative property is being verified; `asserted` flags
/// participate in exit codes, the rest are informational measurements.
struct Flag {
  std::string name;
  std::string claim;
  bool asserted = true;
  bool pass = false;
  double measured = 0.0;
  std::string detail;
};

struct SnapshotRecord {
  FlowField flow;
  ProfileField profile;
};

struct RunRecord {
  Scenario scenario;
  Grid grid{1.0, 64};
  std::vector<EnergyReport> energy;
  std::map<std::string, DecaySeries> series;
  std::map<std::string, FitResult> fits;
  std::vector<Flag> flags;
  std::map<std::string, double> audits;
  std::vector<SnapshotRecord> snapshots;
  bool failed = false;
  std::string failure;

  bool all_asserted_pass() const;
  const Flag* find_flag(const std::string& name) const;
};

/// Deterministic given the scenario (including seed). Step-size collapse and
/// rejected-step exhaustion surface as a failed record, never an exception.
RunRecord run_scenario(const Scenario& s);

/// Names of the flags each scenario kind is contracted to produce (the flag
/// registry backing the summary completeness check).
std::vector<std::string> expected_flags(ScenarioKind kind);

// slope of ln(y) against ln(x) for small sweeps (delta0 scaling tables)
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cw
