#include "nonrecip/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <limits>
#include <thread>

#include "nonrecip/error.hpp"
#include "nonrecip/kernels.hpp"
#include "nonrecip/model.hpp"
#include "nonrecip/steadystate.hpp"

namespace nonrecip {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json kg_json(const SystemParams& p) {
  const NonreciprocityKg kg = kg_from_params(p.g1, p.g2);
  if (kg.reciprocal) return json{{"value", 1.0}, {"reciprocal", true}};
  return json{{"value", number_or_null(kg.value)}, {"reciprocal", false}};
}

json run_header(const RunConfig& cfg) {
  return json{{"mode", to_string(cfg.mode)},
              {"params", params_to_json(cfg.params)},
              {"K_g", kg_json(cfg.params)},
              {"dims", cfg.dims},
              {"thermal_rate_convention", to_string(cfg.thermal_convention)},
              {"cavity_linewidth_map", to_string(cfg.linewidth_map)},
              {"kernel_isa", std::string(kernels::isa_name(kernels::active().isa))}};
}

double rel_change(double a, double b) {
  const double scale = std::max(std::abs(a), 1e-12);
  return std::abs(b - a) / scale;
}

Dims enlarge(const Dims& d) {
  Dims out = d;
  for (int& n : out) n += 2;
  return out;
}

json truncation_json(const TruncationReport& r) {
  return json{{"enlarged_dims", r.enlarged},
              {"n_a", r.n_a},
              {"n_b", r.n_b},
              {"rel_change_n_a", r.rel_change_n_a},
              {"rel_change_n_b", r.rel_change_n_b},
              {"converged", r.converged}};
}

struct PointOutcome {
  SweepRecord record;
  std::vector<std::string> warnings;
};

PointOutcome sweep_point(const RunConfig& cfg, std::size_t index, double value) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  PointOutcome out;
  SweepRecord& r = out.record;
  r.index = index;
  r.swept_value = value;

  const SweepSpec& s = *cfg.sweep;
  SystemParams p = cfg.params;
  try {
    set_parameter(p, s.parameter, value);
    if (cfg.kg && s.parameter != "K_g" && s.parameter != "g1") p.g1 = g1_from_kg(*cfg.kg, p.g2);
    p.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::config, e.code(),
                "sweep point " + std::to_string(index) + ": " + e.what());
  }
  r.g1 = p.g1;
  r.g2 = p.g2;
  const NonreciprocityKg kg = kg_from_params(p.g1, p.g2);
  r.K_g = kg.value;

  const std::string where = "point " + std::to_string(index) + " (" + s.parameter + "=" +
                            format_double(value) + "): ";
  try {
    const AnalyticSteadyState a = analytic_steady_state(analytic_inputs(cfg, p));
    r.n_a_analytic = a.n_a;
    r.n_b_analytic = a.n_b;
  } catch (const Error& e) {
    out.warnings.push_back(where + "analytic skipped, " + e.code() + ": " + e.what());
  }

  if (s.numeric) {
    try {
      const Liouvillian l = three_mode_liouvillian(p, cfg.dims, false);
      const SteadyStateResult ss = solve_sparse(l, cfg.steady);
      const Diagnostics d = diagnostics(ss.rho_ss);
      r.n_a_numeric = ss.n_a;
      r.n_b_numeric = ss.n_b;
      r.residual = ss.residual;
      r.trace = d.trace;
      r.min_eig_herm = d.min_eig_herm;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::solver) throw;
      out.warnings.push_back(where + "numeric skipped, " + e.code() + ": " + e.what());
    }
  }
  if (cfg.record_timing)
    r.wall_time_s = std::chrono::duration<double>(clock::now() - t0).count();
  return out;
}

std::vector<SweepRecord> sweep_all(const RunConfig& cfg, unsigned workers,
                                   std::vector<std::string>* warnings) {
  if (!cfg.sweep) fail_config("missing_key", "no sweep block");
  const std::vector<double> values = cfg.sweep->values();
  std::vector<PointOutcome> results(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        results[i] = sweep_point(cfg, i, values[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(values.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  // first failure by index, so the reported error does not depend on scheduling
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<SweepRecord> records;
  records.reserve(results.size());
  for (auto& r : results) {
    if (warnings) warnings->insert(warnings->end(), r.warnings.begin(), r.warnings.end());
    records.push_back(r.record);
  }
  std::sort(records.begin(), records.end(),
            [](const SweepRecord& a, const SweepRecord& b) { return a.index < b.index; });
  return records;
}

json roots_json(const RootSet& rs) {
  json roots = json::array();
  for (const auto& r : rs.roots)
    roots.push_back({{"value", r.value},
                     {"imag", r.imag},
                     {"partner", number_or_null(r.partner)},
                     {"real", r.real},
                     {"physical", r.physical}});
  return json{{"roots", roots}, {"degenerate", rs.degenerate}, {"selected", rs.selected}};
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::config:
    case ErrorKind::usage: return 2;
    case ErrorKind::solver: return 3;
    case ErrorKind::io: return 4;
  }
  return 3;
}

int report(const std::string& code, const std::string& message, int status) {
  std::cerr << json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
  return status;
}

}  // namespace

Liouvillian three_mode_liouvillian(const SystemParams& p, const Dims& dims, bool trace_correction) {
  return build(hamiltonian_three_mode(p, dims), dissipators_three_mode(p, dims), trace_correction);
}

MeanFieldInputs analytic_inputs(const RunConfig& cfg, const SystemParams& p) {
  return mean_field_inputs(p, effective_bath(p, cfg.linewidth_map));
}

SweepRecord run_sweep_point(const RunConfig& cfg, std::size_t index, double value) {
  if (!cfg.sweep) fail_config("missing_key", "no sweep block");
  return sweep_point(cfg, index, value).record;
}

std::vector<SweepRecord> run_sweep(const RunConfig& cfg, unsigned workers) {
  return sweep_all(cfg, workers, nullptr);
}

unsigned default_worker_count() {
  if (const char* env = std::getenv("NONRECIP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(std::min(v, 1024L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

TruncationReport truncation_check_steady(const RunConfig& cfg, double n_a, double n_b) {
  TruncationReport r;
  r.enlarged = enlarge(cfg.dims);
  const SteadyStateResult ss =
      solve_sparse(three_mode_liouvillian(cfg.params, r.enlarged, false), cfg.steady);
  r.n_a = ss.n_a;
  r.n_b = ss.n_b;
  r.rel_change_n_a = rel_change(n_a, ss.n_a);
  r.rel_change_n_b = rel_change(n_b, ss.n_b);
  r.converged = r.rel_change_n_a < 0.01 && r.rel_change_n_b < 0.01;
  return r;
}

TruncationReport truncation_check_evolve(const RunConfig& cfg, double n_a, double n_b) {
  TruncationReport r;
  r.enlarged = enlarge(cfg.dims);
  const Liouvillian l = three_mode_liouvillian(cfg.params, r.enlarged, cfg.trace_correction);
  const EvolutionResult ev = evolve(l, cfg.initial.build(r.enlarged), cfg.evolution);
  r.n_a = ev.records.back().n_a;
  r.n_b = ev.records.back().n_b;
  r.rel_change_n_a = rel_change(n_a, r.n_a);
  r.rel_change_n_b = rel_change(n_b, r.n_b);
  r.converged = r.rel_change_n_a < 0.01 && r.rel_change_n_b < 0.01;
  return r;
}

json run_evolve(const RunConfig& cfg, const std::string& csv_path) {
  const Liouvillian l = three_mode_liouvillian(cfg.params, cfg.dims, cfg.trace_correction);
  const EvolutionResult ev = evolve(l, cfg.initial.build(cfg.dims), cfg.evolution);
  emit_time_series_csv(ev.records, csv_path);

  const TrajectoryRecord& last = ev.records.back();
  double worst_trace = 0.0;
  double worst_eig = std::numeric_limits<double>::infinity();
  for (const auto& r : ev.records) {
    worst_trace = std::max(worst_trace, std::abs(r.trace - 1.0));
    worst_eig = std::min(worst_eig, r.min_eig_herm);
  }
  json j = run_header(cfg);
  j["initial_state"] = cfg.initial.to_string();
  j["trace_correction"] = cfg.trace_correction;
  j["evolution"] = {{"method", to_string(cfg.evolution.method)},
                    {"t_final", cfg.evolution.t_final},
                    {"dt", cfg.evolution.dt},
                    {"accepted_steps", ev.accepted_steps},
                    {"rejected_steps", ev.rejected_steps}};
  j["final"] = {{"t", last.t},           {"n_a", last.n_a},   {"n_b", last.n_b},
                {"n_c", last.n_c},       {"trace", last.trace}, {"min_diag", last.min_diag},
                {"min_eig_herm", last.min_eig_herm}};
  j["final_derivative_norm"] = ev.final_derivative_norm;
  j["steady"] = ev.steady;
  j["max_trace_error"] = worst_trace;
  j["min_eig_herm_over_run"] = worst_eig;
  j["time_series_csv"] = csv_path;
  if (cfg.truncation_check)
    j["truncation"] = truncation_json(truncation_check_evolve(cfg, last.n_a, last.n_b));
  return j;
}

json run_steady(const RunConfig& cfg) {
  const Liouvillian l = three_mode_liouvillian(cfg.params, cfg.dims, false);
  const SteadyStateResult ss = solve_sparse(l, cfg.steady);
  const Diagnostics d = diagnostics(ss.rho_ss);
  json j = run_header(cfg);
  j["steady"] = {{"n_a", ss.n_a},
                 {"n_b", ss.n_b},
                 {"n_c", ss.n_c},
                 {"residual", ss.residual},
                 {"repair_magnitude", ss.repair_magnitude},
                 {"method", ss.method},
                 {"replaced_row", ss.replaced_row},
                 {"trace", d.trace},
                 {"min_diag", d.min_diag},
                 {"min_eig_herm", d.min_eig_herm}};
  if (cfg.truncation_check) j["truncation"] = truncation_json(truncation_check_steady(cfg, ss.n_a, ss.n_b));
  return j;
}

json run_analytic(const RunConfig& cfg) {
  const SystemParams& p = cfg.params;
  const SidebandRates rates = sideband_rates(p, cfg.linewidth_map);
  const EffectiveBath eff = effective_bath(p, rates);
  const MeanFieldInputs in = mean_field_inputs(p, eff);
  const QuadraticCoeffs q = quadratic_coeffs(in);
  const AnalyticSteadyState st = analytic_steady_state(in);
  json j = run_header(cfg);
  j["sideband_rates"] = {{"a_minus", rates.a_minus}, {"a_plus", rates.a_plus}};
  j["effective_bath"] = {{"gamma_opt", eff.gamma_opt},
                         {"n_opt", eff.n_opt},
                         {"kappa_a_eff", eff.kappa_a_eff},
                         {"nbar_a_eff", eff.nbar_a_eff}};
  j["transfer_rates"] = {{"up", in.rate_up()}, {"down", in.rate_down()}};
  j["coefficients"] = {{"A", q.A}, {"B", q.B}, {"C", q.C},
                       {"D", number_or_null(q.D)}, {"E", number_or_null(q.E)},
                       {"F", number_or_null(q.F)}};
  j["roots_b"] = roots_json(steady_quadratic_b(in));
  j["roots_a"] = roots_json(steady_quadratic_a(in));
  j["steady"] = {{"n_a", st.n_a}, {"n_b", st.n_b}};
  return j;
}

int run(const CliOptions& opt) {
  try {
    json doc = load_json_file(opt.config_path);
    for (const auto& o : opt.overrides) apply_override(doc, o);
    RunConfig cfg = parse_config(doc);
    if (opt.out) cfg.output_path = *opt.out;

    switch (cfg.mode) {
      case RunMode::evolve: {
        const json summary = run_evolve(cfg, cfg.output_path);
        std::filesystem::path sp = cfg.output_path;
        sp.replace_extension(".summary.json");
        write_text_file(sp, summary.dump(2) + "\n");
        if (!opt.quiet) std::cout << summary["final"].dump() << '\n';
        break;
      }
      case RunMode::steady:
      case RunMode::analytic: {
        const json j = cfg.mode == RunMode::steady ? run_steady(cfg) : run_analytic(cfg);
        write_text_file(cfg.output_path, j.dump(2) + "\n");
        if (!opt.quiet) std::cout << j["steady"].dump() << '\n';
        break;
      }
      case RunMode::sweep: {
        std::vector<std::string> warnings;
        const auto records = sweep_all(cfg, default_worker_count(), &warnings);
        emit_csv(records, cfg.output_path);
        if (!opt.quiet) {
          for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
          std::cout << "wrote " << records.size() << " rows to " << cfg.output_path << '\n';
        }
        break;
      }
    }
    return 0;
  } catch (const Error& e) {
    return report(e.code(), e.what(), exit_code(e.kind()));
  } catch (const nlohmann::json::exception& e) {
    return report("invalid_config", e.what(), 2);
  } catch (const std::bad_alloc&) {
    return report("out_of_memory", "allocation failed; reduce dims", 3);
  } catch (const std::exception& e) {
    return report("internal_error", e.what(), 3);
  }
}

}  // namespace nonrecip
