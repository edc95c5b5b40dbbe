#pragma once

#include "routh/cli/config.hpp"
#include "routh/diagnostics.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace routh::cli {

enum ExitCode : int { kSuccess = 0, kCheckFailed = 1, kConfigError = 2, kNumericalFailure = 3 };

/// Everything a run produces, in the column layout of the CSV files.
struct Simulation {
  RunConfig config;
  double h = 0.0;
  std::vector<std::string> columns;  // after step, t
  std::vector<long> steps;
  std::vector<Vector> rows;
  /// Shape coordinates per row (unwrapped), for cross-run comparisons.
  std::vector<Vector> shapes;
  std::vector<DriftPoint> energy;
  std::vector<DriftPoint> momentum;
  std::optional<std::string> failure;
};

/// Runs a validated configuration. Numerical failures truncate the run and are
/// recorded in `failure`.
Simulation simulate(const RunConfig& cfg);

/// Writes the files selected by cfg.emit into cfg.out.
void write_outputs(const Simulation& sim);

/// simulate + write_outputs. Returns the process exit status.
int run(const RunConfig& cfg, std::ostream& log);

/// Paired drift series of two runs over the same final time, in <out>/compare.csv,
/// plus <out>/compare_summary.csv.
int compare(const RunConfig& a, const RunConfig& b, const std::string& out, std::ostream& log);

/// Global error at t = T against a 10x finer order-4 reference for each h; writes
/// <out>/order.csv and reports the log-log slope.
int order(const RunConfig& cfg, const std::vector<double>& h_list, double final_time, std::ostream& log);

/// Quick invariant suite on both systems; one PASS/FAIL line each.
int check(std::ostream& log);

/// %.17g formatting.
std::string format_real(double v);

}  // namespace routh::cli
