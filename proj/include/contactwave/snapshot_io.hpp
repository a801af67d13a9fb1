#pragma once

#include <string>

#include "contactwave/flow.hpp"
#include "contactwave/profile.hpp"

namespace cw {

inline constexpr int kSnapshotSchemaVersion = 1;

/// Columnar snapshot of one output time: x, flow state, profile state and the
/// perturbation. Floating-point fields use the shortest representation that
/// parses back to the identical double, so files round-trip losslessly.
struct Snapshot {
  int schema_version = kSnapshotSchemaVersion;
  std::string params_hash;
  double t = 0.0;
  Array x, v, u, theta, V, U, Theta, phi, psi, zeta;
};

std::string params_hash(const PhysParams& p);

void write_snapshot(const std::string& path, const FlowField& flow, const ProfileField& profile,
                    const PhysParams& p, const Grid& grid);

/// Throws SchemaMismatch on a version other than kSnapshotSchemaVersion and
/// std::runtime_error with path context on malformed files.
Snapshot read_snapshot(const std::string& path);

}  // namespace cw
