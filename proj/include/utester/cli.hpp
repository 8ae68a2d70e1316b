#pragma once

#include "utester/json_io.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace utester {

/// status is "pass", "fail" or "error".
struct CommandReport {
  std::string command;
  std::string status;
  Json payload;
  double elapsed_ms = 0.0;

  Json to_json() const;
};

struct CommandResult {
  /// 0 pass, 1 check failure, 2 usage or configuration error.
  int exit_code = 0;
  CommandReport report;
  /// Usage or error text for stderr when no report applies.
  std::string message;
};

/// Parse and run one invocation. argv excludes the program name. Human-readable
/// progress goes to `log` unless --json-only is given.
CommandResult run_command(const std::vector<std::string>& argv, std::ostream& log);

}  // namespace utester
