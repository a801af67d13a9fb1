#pragma once

#include <string>

#include "contactwave/errors.hpp"
#include "contactwave/scenario.hpp"

namespace cw {

/// Textual run configuration: strict sectioned key=value format, '#' comment
/// lines, unknown sections/keys rejected with the offending line number.
/// Grammar and a canonical example live in the repository README.
struct RunConfig {
  Scenario scenario;
  std::string out_dir;  // empty = resolved by the CLI
};

RunConfig parse_config(const std::string& text);          // throws ConfigError
RunConfig parse_config_file(const std::string& path);     // adds path context
std::string serialize_config(const RunConfig& cfg);       // canonical form

}  // namespace cw
