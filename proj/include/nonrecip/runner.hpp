#pragma once
// Orchestration of the four run modes and the command-line entry point.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nonrecip/config.hpp"
#include "nonrecip/records.hpp"

namespace nonrecip {

/// Three-mode Liouvillian for a run.
Liouvillian three_mode_liouvillian(const SystemParams& p, const Dims& dims, bool trace_correction);

/// Mean-field inputs honoring the configured cavity linewidth map.
MeanFieldInputs analytic_inputs(const RunConfig& cfg, const SystemParams& p);

SweepRecord run_sweep_point(const RunConfig& cfg, std::size_t index, double value);

/// Runs every sweep point on up to `workers` threads; rows come back sorted.
std::vector<SweepRecord> run_sweep(const RunConfig& cfg, unsigned workers);

/// NONRECIP_THREADS if set (>= 1), else the hardware concurrency.
unsigned default_worker_count();

struct TruncationReport {
  Dims enlarged;
  double n_a = 0.0;
  double n_b = 0.0;
  double rel_change_n_a = 0.0;
  double rel_change_n_b = 0.0;
  bool converged = false;  // both changes below 1%
};

/// Repeats a steady solve with every truncation raised by two.
TruncationReport truncation_check_steady(const RunConfig& cfg, double n_a, double n_b);
/// Same for the endpoint of an evolve run.
TruncationReport truncation_check_evolve(const RunConfig& cfg, double n_a, double n_b);

nlohmann::json run_evolve(const RunConfig& cfg, const std::string& csv_path);
nlohmann::json run_steady(const RunConfig& cfg);
nlohmann::json run_analytic(const RunConfig& cfg);

struct CliOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::string> out;
  bool quiet = false;
};

/// Exit codes: 0 success, 2 configuration, 3 solver, 4 I/O. Errors are
/// reported on stderr as {"error": {"code": ..., "message": ...}}.
int run(const CliOptions& opt);

}  // namespace nonrecip
