#include "nonrecip/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <regex>
#include <sstream>

#include "nonrecip/error.hpp"

namespace nonrecip {

using nlohmann::json;

namespace {

struct ParamField {
  const char* name;
  double SystemParams::*member;
};

constexpr ParamField kParamFields[] = {
    {"omega_a", &SystemParams::omega_a}, {"omega_b", &SystemParams::omega_b},
    {"delta", &SystemParams::delta},     {"gamma", &SystemParams::gamma},
    {"g", &SystemParams::g},             {"g1", &SystemParams::g1},
    {"g2", &SystemParams::g2},           {"kappa_a", &SystemParams::kappa_a},
    {"kappa_b", &SystemParams::kappa_b}, {"nbar_a", &SystemParams::nbar_a},
    {"nbar_b", &SystemParams::nbar_b},
};

const ParamField* find_field(std::string_view name) {
  for (const auto& f : kParamFields)
    if (name == f.name) return &f;
  return nullptr;
}

void reject_unknown(const json& obj, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      fail_config("unknown_key", "unknown key '" + key + "' in " + std::string(where));
  }
}

const json& require_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail_config("invalid_type", where + " must be an object");
  return j;
}

double get_number(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number())
    fail_config("invalid_type", where + "." + key + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail_config("invalid_parameter", where + "." + key + " must be finite");
  return d;
}

bool get_bool(const json& obj, const char* key, bool fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) fail_config("invalid_type", where + "." + key + " must be a boolean");
  return obj.at(key).get<bool>();
}

std::string get_string(const json& obj, const char* key, std::string fallback,
                       const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) fail_config("invalid_type", where + "." + key + " must be a string");
  return obj.at(key).get<std::string>();
}

std::uint64_t get_count(const json& obj, const char* key, std::uint64_t fallback,
                        const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    fail_config("invalid_type", where + "." + key + " must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

// Complex numbers arrive as {"re":..,"im":..} or [re, im]; both are refused.
void check_coupling_type(const json& params, const char* key) {
  if (!params.contains(key)) return;
  const json& v = params.at(key);
  if (v.is_object() || v.is_array() || v.is_string())
    fail_config("complex_coupling",
                std::string("params.") + key + " must be a real number; complex couplings are not supported");
}

SystemParams parse_params(const json& j, std::optional<double>& kg_out) {
  require_object(j, "params");
  std::vector<std::string_view> allowed;
  for (const auto& f : kParamFields) allowed.push_back(f.name);
  allowed.push_back("K_g");
  for (const auto& [key, _] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      fail_config("unknown_key", "unknown key '" + key + "' in params");

  for (const char* key : {"g", "g1", "g2", "K_g"}) check_coupling_type(j, key);

  const bool has_g1 = j.contains("g1");
  const bool has_kg = j.contains("K_g");
  if (has_g1 == has_kg)
    fail_config("ambiguous_coupling",
                has_g1 ? "params gives both g1 and K_g; supply exactly one"
                       : "params gives neither g1 nor K_g; supply exactly one");

  SystemParams p;
  for (const auto& f : kParamFields) p.*f.member = get_number(j, f.name, p.*f.member, "params");
  if (has_kg) {
    const double kg = get_number(j, "K_g", 0.0, "params");
    if (!(kg > 1.0)) fail_config("invalid_parameter", "params.K_g must be > 1");
    if (!(p.g2 > 0.0)) fail_config("invalid_parameter", "params.K_g needs g2 > 0");
    p.g1 = g1_from_kg(kg, p.g2);
    kg_out = kg;
  }
  try {
    p.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::config, e.code(), e.what());
  }
  return p;
}

Dims parse_dims(const json& j) {
  if (!j.is_array() || j.size() != 3)
    fail_config("invalid_dims", "dims must be an array of three integers (A, B, cavity)");
  Dims d;
  for (const auto& v : j) {
    if (!v.is_number_integer()) fail_config("invalid_dims", "dims entries must be integers");
    const auto n = v.get<std::int64_t>();
    if (n < 2 || n > 4096) fail_config("invalid_dims", "dims entries must be in [2, 4096]");
    d.push_back(static_cast<int>(n));
  }
  return d;
}

EvolutionConfig parse_evolution(const json& j) {
  const std::string w = "evolution";
  require_object(j, w);
  reject_unknown(j, w,
                 {"t_final", "dt", "method", "rel_tol", "abs_tol", "record_every", "steady_eps",
                  "stop_at_steady", "trace_tolerance", "enforce_trace", "min_step"});
  EvolutionConfig c;
  c.t_final = get_number(j, "t_final", c.t_final, w);
  c.dt = get_number(j, "dt", c.dt, w);
  c.method = parse_integrator(get_string(j, "method", std::string(to_string(c.method)), w));
  c.rel_tol = get_number(j, "rel_tol", c.rel_tol, w);
  c.abs_tol = get_number(j, "abs_tol", c.abs_tol, w);
  c.record_every = get_count(j, "record_every", c.record_every, w);
  c.steady_eps = get_number(j, "steady_eps", c.steady_eps, w);
  c.stop_at_steady = get_bool(j, "stop_at_steady", c.stop_at_steady, w);
  c.trace_tolerance = get_number(j, "trace_tolerance", c.trace_tolerance, w);
  c.enforce_trace = get_bool(j, "enforce_trace", c.enforce_trace, w);
  c.min_step = get_number(j, "min_step", c.min_step, w);
  c.validate();
  return c;
}

SteadyStateOptions parse_steady(const json& j) {
  const std::string w = "steady";
  require_object(j, w);
  reject_unknown(j, w,
                 {"row_policy", "solver", "iterative_threshold", "conditioning_threshold",
                  "gmres_restart", "max_iterations", "iterative_tolerance"});
  SteadyStateOptions o;
  o.row_policy = parse_row_policy(get_string(j, "row_policy", "largest_diagonal", w));
  o.solver = parse_linear_solver(get_string(j, "solver", "automatic", w));
  o.iterative_threshold =
      static_cast<Eigen::Index>(get_count(j, "iterative_threshold",
                                          static_cast<std::uint64_t>(o.iterative_threshold), w));
  o.conditioning_threshold = get_number(j, "conditioning_threshold", o.conditioning_threshold, w);
  o.gmres_restart = static_cast<int>(get_count(j, "gmres_restart", o.gmres_restart, w));
  o.max_iterations = static_cast<int>(get_count(j, "max_iterations", o.max_iterations, w));
  o.iterative_tolerance = get_number(j, "iterative_tolerance", o.iterative_tolerance, w);
  if (!(o.conditioning_threshold > 0.0) || !(o.iterative_tolerance > 0.0) || o.gmres_restart < 1 ||
      o.max_iterations < 1)
    fail_config("invalid_steady", "steady solver options must be positive");
  return o;
}

SweepSpec parse_sweep(const json& j) {
  const std::string w = "sweep";
  require_object(j, w);
  reject_unknown(j, w, {"parameter", "start", "stop", "count", "spacing", "numeric", "values"});
  if (!j.contains("parameter")) fail_config("missing_key", "sweep needs a parameter");
  SweepSpec s;
  s.parameter = get_string(j, "parameter", "", w);
  if (s.parameter != "K_g" && !find_field(s.parameter))
    fail_config("invalid_sweep", "cannot sweep unknown parameter '" + s.parameter + "'");
  s.numeric = get_bool(j, "numeric", false, w);
  if (j.contains("values")) {
    if (j.contains("start") || j.contains("stop") || j.contains("count") || j.contains("spacing"))
      fail_config("invalid_sweep", "sweep.values excludes start/stop/count/spacing");
    const json& v = j.at("values");
    if (!v.is_array() || v.empty()) fail_config("invalid_sweep", "sweep.values must be a nonempty array");
    for (const auto& x : v) {
      if (!x.is_number()) fail_config("invalid_type", "sweep.values entries must be numbers");
      s.explicit_values.push_back(x.get<double>());
    }
    s.count = s.explicit_values.size();
    return s;
  }
  if (!j.contains("start") || !j.contains("stop") || !j.contains("count"))
    fail_config("missing_key", "sweep needs start, stop and count, or values");
  s.start = get_number(j, "start", 0.0, w);
  s.stop = get_number(j, "stop", 0.0, w);
  s.count = get_count(j, "count", 1, w);
  if (s.count < 1) fail_config("invalid_sweep", "sweep.count must be >= 1");
  const std::string spacing = get_string(j, "spacing", "linear", w);
  if (spacing == "linear") s.spacing = Spacing::linear;
  else if (spacing == "log") s.spacing = Spacing::log;
  else fail_config("invalid_sweep", "sweep.spacing must be linear or log");
  if (s.spacing == Spacing::log && !(s.start > 0.0 && s.stop > 0.0))
    fail_config("invalid_sweep", "log spacing needs positive endpoints");
  return s;
}

}  // namespace

std::string_view to_string(RunMode m) {
  switch (m) {
    case RunMode::evolve: return "evolve";
    case RunMode::steady: return "steady";
    case RunMode::analytic: return "analytic";
    case RunMode::sweep: return "sweep";
  }
  return "?";
}

InitialState InitialState::parse(std::string_view text) {
  const std::string s(text);
  static const std::regex fock(R"(^\s*\|\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*>\s*$)");
  static const std::regex thermal(
      R"(^\s*thermal\(\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*\)\s*$)");
  std::smatch m;
  InitialState st;
  if (std::regex_match(s, m, fock)) {
    st.kind = Kind::fock;
    for (int i = 1; i <= 3; ++i) st.occupations.push_back(std::stoi(m[i].str()));
    return st;
  }
  if (std::regex_match(s, m, thermal)) {
    st.kind = Kind::thermal;
    for (int i = 1; i <= 3; ++i) {
      double v = 0.0;
      try {
        v = std::stod(m[i].str());
      } catch (const std::exception&) {
        fail_config("invalid_initial_state", "cannot parse '" + m[i].str() + "'");
      }
      if (!(v >= 0.0)) fail_config("invalid_initial_state", "thermal occupations must be >= 0");
      st.nbar.push_back(v);
    }
    return st;
  }
  fail_config("invalid_initial_state", "initial_state must look like |i,j,k> or thermal(a,b,c), got '" + s + "'");
}

DensityMatrix InitialState::build(const Dims& dims) const {
  try {
    return kind == Kind::fock ? DensityMatrix::fock(dims, occupations)
                              : DensityMatrix::thermal(dims, nbar);
  } catch (const Error& e) {
    throw Error(ErrorKind::config, e.code(), e.what());
  }
}

std::string InitialState::to_string() const {
  std::ostringstream os;
  if (kind == Kind::fock) {
    os << '|' << occupations[0] << ',' << occupations[1] << ',' << occupations[2] << '>';
  } else {
    os << "thermal(" << nbar[0] << ',' << nbar[1] << ',' << nbar[2] << ')';
  }
  return os.str();
}

std::vector<double> SweepSpec::values() const {
  if (!explicit_values.empty()) return explicit_values;
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = start;
    return v;
  }
  const double last = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / last;
    v[i] = spacing == Spacing::linear
               ? start + f * (stop - start)
               : std::exp(std::log(start) + f * (std::log(stop) - std::log(start)));
  }
  // keep the endpoints exact
  v.front() = start;
  v.back() = stop;
  return v;
}

RunConfig parse_config(const json& doc) {
  require_object(doc, "config");
  reject_unknown(doc, "config",
                 {"mode", "params", "dims", "initial_state", "evolution", "trace_correction",
                  "steady", "sweep", "output_path", "thermal_rate_convention",
                  "cavity_linewidth_map", "seed", "record_timing", "truncation_check"});
  RunConfig c;
  if (!doc.contains("mode") || !doc.contains("params"))
    fail_config("missing_key", "config needs mode and params");
  const std::string mode = get_string(doc, "mode", "", "config");
  if (mode == "evolve") c.mode = RunMode::evolve;
  else if (mode == "steady") c.mode = RunMode::steady;
  else if (mode == "analytic") c.mode = RunMode::analytic;
  else if (mode == "sweep") c.mode = RunMode::sweep;
  else fail_config("invalid_mode", "mode must be evolve, steady, analytic or sweep");

  c.params = parse_params(doc.at("params"), c.kg);
  if (doc.contains("dims")) c.dims = parse_dims(doc.at("dims"));
  if (doc.contains("initial_state")) {
    if (!doc.at("initial_state").is_string())
      fail_config("invalid_type", "initial_state must be a string");
    c.initial = InitialState::parse(doc.at("initial_state").get<std::string>());
  }
  if (doc.contains("evolution")) c.evolution = parse_evolution(doc.at("evolution"));
  c.trace_correction = get_bool(doc, "trace_correction", c.trace_correction, "config");
  if (doc.contains("steady")) c.steady = parse_steady(doc.at("steady"));
  if (doc.contains("sweep")) c.sweep = parse_sweep(doc.at("sweep"));
  if (c.mode == RunMode::sweep && !c.sweep)
    fail_config("missing_key", "sweep mode needs a sweep block");
  c.output_path = get_string(doc, "output_path", c.output_path, "config");
  c.thermal_convention = parse_thermal_convention(
      get_string(doc, "thermal_rate_convention", std::string(to_string(c.thermal_convention)), "config"));
  c.linewidth_map = parse_linewidth_map(
      get_string(doc, "cavity_linewidth_map", std::string(to_string(c.linewidth_map)), "config"));
  c.seed = get_count(doc, "seed", c.seed, "config");
  c.record_timing = get_bool(doc, "record_timing", c.record_timing, "config");
  c.truncation_check = get_bool(doc, "truncation_check", c.truncation_check, "config");

  // Reject a Fock initial state outside the truncation at load time.
  if (c.mode == RunMode::evolve) (void)c.initial.build(c.dims);
  return c;
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail_config("unreadable_config", "cannot open config '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail_config("invalid_json", "config '" + path.string() + "': " + e.what());
  }
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    fail_config("invalid_override", "override must be key=value, got '" + std::string(assignment) + "'");
  const std::string path(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  std::vector<std::string> keys;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    keys.push_back(path.substr(start, dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (std::any_of(keys.begin(), keys.end(), [](const std::string& k) { return k.empty(); }))
    fail_config("invalid_override", "empty path component in '" + path + "'");

  json* node = &doc;
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    if (!node->is_object()) fail_config("invalid_override", "'" + path + "' crosses a non-object");
    node = &(*node)[keys[i]];
    if (node->is_null()) *node = json::object();
  }
  if (!node->is_object()) fail_config("invalid_override", "'" + path + "' crosses a non-object");
  if (value.is_null()) node->erase(keys.back());
  else (*node)[keys.back()] = std::move(value);
}

void set_parameter(SystemParams& p, std::string_view name, double value) {
  if (name == "K_g") {
    p.g1 = g1_from_kg(value, p.g2);
    return;
  }
  const ParamField* f = find_field(name);
  if (!f) fail_config("invalid_sweep", "unknown parameter '" + std::string(name) + "'");
  p.*f->member = value;
}

double get_parameter(const SystemParams& p, std::string_view name) {
  if (name == "K_g") return kg_from_params(p.g1, p.g2).value;
  const ParamField* f = find_field(name);
  if (!f) fail_config("invalid_sweep", "unknown parameter '" + std::string(name) + "'");
  return p.*f->member;
}

json params_to_json(const SystemParams& p) {
  json j = json::object();
  for (const auto& f : kParamFields) j[f.name] = p.*f.member;
  return j;
}

}  // namespace nonrecip
