#pragma once
// Tabular outputs: sweep rows and evolution time series.
//
// The sweep header is a versioned contract read by the plotting scripts;
// change it only together with them.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nonrecip/dynamics.hpp"

namespace nonrecip {

inline constexpr std::string_view kSweepCsvHeader =
    "index,swept_value,g1,g2,K_g,n_a_analytic,n_b_analytic,n_a_numeric,n_b_numeric,"
    "residual,trace,min_eig_herm,wall_time_s";

inline constexpr std::string_view kTimeSeriesCsvHeader =
    "t,n_a,n_b,n_c,trace,min_diag,min_eig_herm";

struct SweepRecord {
  std::size_t index = 0;
  double swept_value = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double K_g = 1.0;  // +inf when g1 == g2
  std::optional<double> n_a_analytic;
  std::optional<double> n_b_analytic;
  std::optional<double> n_a_numeric;
  std::optional<double> n_b_numeric;
  std::optional<double> residual;
  std::optional<double> trace;
  std::optional<double> min_eig_herm;
  std::optional<double> wall_time_s;

  bool operator==(const SweepRecord&) const = default;
};

/// 12 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double v);
double parse_double(std::string_view s);

/// Rows sorted by index. Throws Error(kind=io) if the path is unwritable.
std::string sweep_csv(std::vector<SweepRecord> records);
void emit_csv(const std::vector<SweepRecord>& records, const std::filesystem::path& path);

/// Inverse of sweep_csv. Throws Error(kind=io) on a header mismatch.
std::vector<SweepRecord> parse_sweep_csv(std::string_view text);

std::string time_series_csv(const std::vector<TrajectoryRecord>& records);
void emit_time_series_csv(const std::vector<TrajectoryRecord>& records,
                          const std::filesystem::path& path);

/// Writes text atomically enough for our purposes: to a sibling temp file,
/// then renamed over the target.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace nonrecip
