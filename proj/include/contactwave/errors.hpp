#pragma once

#include <stdexcept>
#include <string>

namespace cw {

// A time step produced a nonpositive or non-finite state; the caller may
// halve dt and retry.
struct StepRejected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Adaptive halving hit its floor without producing an admissible step.
struct BlowUp : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridTooCoarse : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureNotConverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInitialData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TimeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonpositiveValue : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Configuration / file format problems carry a location when known.
struct ConfigError : std::runtime_error {
  int line;
  ConfigError(int line_, const std::string& what_)
      : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what_ : what_),
        line(line_) {}
};

struct SchemaMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cw
