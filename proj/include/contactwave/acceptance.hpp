#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "contactwave/experiments.hpp"

namespace cw {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOutcome {
  std::vector<CriterionResult> criteria;
  std::map<std::string, RunRecord> records;
  bool all_pass() const;
};

/// Runs the ten acceptance criteria on their pinned configurations. When
/// `progress` is given, one "PASS/FAIL criterion k" line is streamed per
/// criterion as it completes.
AcceptanceOutcome run_acceptance(std::ostream* progress = nullptr);

}  // namespace cw
