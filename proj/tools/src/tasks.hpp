#pragma once

#include <iosfwd>
#include <string>

#include "config.hpp"

namespace perilimit::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFail = 2;
inline constexpr int kExitConfig = 64;

struct TaskOutcome {
  std::string status;  // "pass", "fail", or a recoverability verdict
  int exit_code = kExitPass;
  Json result;
  std::string csv;
};

/// Runs run.task. Throws ConfigError for invalid settings and
/// perilimit::Error for numerical failures.
TaskOutcome run_task(const RunConfig& cfg);

/// summary.json: tool, version, task, status, exit_code, config, result and,
/// unless suppressed, timestamp.
Json make_summary(const RunConfig& cfg, const TaskOutcome& outcome, bool with_timestamp);

/// Runs the task and writes summary.json and detail.csv into out_dir
/// (created if missing). Returns the exit code; diagnostics go to `err`.
int run_and_report(const RunConfig& cfg, const std::string& out_dir, bool with_timestamp, std::ostream& err);

}  // namespace perilimit::cli
