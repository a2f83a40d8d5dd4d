#include "nonrecip/records.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <system_error>

#include "nonrecip/error.hpp"

namespace nonrecip {

namespace {

[[noreturn]] void fail_io(std::string code, const std::string& msg) {
  throw Error(ErrorKind::io, std::move(code), msg);
}

void put(std::string& out, const std::optional<double>& v) {
  if (v) out += format_double(*v);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto p = line.find(sep, start);
    parts.push_back(line.substr(start, p == std::string_view::npos ? p : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return parts;
}

std::optional<double> opt(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    fail_io("malformed_csv", "cannot parse number '" + std::string(s) + "'");
  return v;
}

std::string sweep_csv(std::vector<SweepRecord> records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const SweepRecord& a, const SweepRecord& b) { return a.index < b.index; });
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.index);
    for (double v : {r.swept_value, r.g1, r.g2, r.K_g}) {
      out += ',';
      out += format_double(v);
    }
    for (const auto* v : {&r.n_a_analytic, &r.n_b_analytic, &r.n_a_numeric, &r.n_b_numeric,
                          &r.residual, &r.trace, &r.min_eig_herm, &r.wall_time_s}) {
      out += ',';
      put(out, *v);
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<SweepRecord>& records, const std::filesystem::path& path) {
  write_text_file(path, sweep_csv(records));
}

std::vector<SweepRecord> parse_sweep_csv(std::string_view text) {
  std::vector<SweepRecord> out;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (header) {
      if (line != kSweepCsvHeader) fail_io("csv_header_mismatch", "unexpected sweep CSV header");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 13) fail_io("malformed_csv", "sweep row has " + std::to_string(f.size()) + " fields");
    SweepRecord r;
    const double idx = parse_double(f[0]);
    if (!(idx >= 0) || idx != std::floor(idx)) fail_io("malformed_csv", "bad index");
    r.index = static_cast<std::size_t>(idx);
    r.swept_value = parse_double(f[1]);
    r.g1 = parse_double(f[2]);
    r.g2 = parse_double(f[3]);
    r.K_g = parse_double(f[4]);
    r.n_a_analytic = opt(f[5]);
    r.n_b_analytic = opt(f[6]);
    r.n_a_numeric = opt(f[7]);
    r.n_b_numeric = opt(f[8]);
    r.residual = opt(f[9]);
    r.trace = opt(f[10]);
    r.min_eig_herm = opt(f[11]);
    r.wall_time_s = opt(f[12]);
    out.push_back(r);
  }
  if (header) fail_io("csv_header_mismatch", "empty sweep CSV");
  return out;
}

std::string time_series_csv(const std::vector<TrajectoryRecord>& records) {
  std::string out(kTimeSeriesCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    bool first = true;
    for (double v : {r.t, r.n_a, r.n_b, r.n_c, r.trace, r.min_diag, r.min_eig_herm}) {
      if (!first) out += ',';
      first = false;
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

void emit_time_series_csv(const std::vector<TrajectoryRecord>& records,
                          const std::filesystem::path& path) {
  write_text_file(path, time_series_csv(records));
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail_io("unwritable_path", "cannot write '" + path.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) fail_io("write_failed", "short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail_io("unwritable_path", "cannot move output into '" + path.string() + "'");
  }
}

}  // namespace nonrecip
