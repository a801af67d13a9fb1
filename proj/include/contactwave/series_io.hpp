#pragma once

#include <string>

#include "contactwave/experiments.hpp"

namespace cw {

void write_series_csv(const std::string& path, const DecaySeries& series);
void write_energy_csv(const std::string& path, const std::vector<EnergyReport>& energy);

/// Structured summary: params echo, flags, fits, audits; key order fixed so
/// identical runs produce byte-identical files.
std::string summary_json(const RunRecord& rec);

/// Writes every series, the energy history, the summary and any snapshots
/// into dir (created if needed). Returns the summary path.
std::string emit_run(const RunRecord& rec, const std::string& dir);

}  // namespace cw
