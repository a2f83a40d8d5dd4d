#pragma once
// Run configuration: JSON parsing, validation and dotted-path overrides.
// The accepted schema is documented in schema/run_config.schema.json.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nonrecip/analytic.hpp"
#include "nonrecip/dynamics.hpp"
#include "nonrecip/params.hpp"
#include "nonrecip/steadystate.hpp"

namespace nonrecip {

enum class RunMode { evolve, steady, analytic, sweep };
enum class Spacing { linear, log };

std::string_view to_string(RunMode m);

/// "|i,j,k>" product Fock state or "thermal(na, nb, nc)".
struct InitialState {
  enum class Kind { fock, thermal };
  Kind kind = Kind::fock;
  std::vector<int> occupations;
  std::vector<double> nbar;

  static InitialState parse(std::string_view text);
  DensityMatrix build(const Dims& dims) const;
  std::string to_string() const;
};

struct SweepSpec {
  std::string parameter;  // "K_g" or a SystemParams field name
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 1;
  Spacing spacing = Spacing::linear;
  bool numeric = false;  // also run the sparse steady-state solver per point
  std::vector<double> explicit_values;  // when given, replaces start/stop/count

  std::vector<double> values() const;
};

struct RunConfig {
  RunMode mode = RunMode::analytic;
  SystemParams params;     // g1 already resolved when K_g was given
  std::optional<double> kg;  // as supplied, if the coupling was given as K_g
  Dims dims{6, 8, 4};
  InitialState initial = InitialState::parse("|0,2,0>");
  EvolutionConfig evolution;
  bool trace_correction = true;
  SteadyStateOptions steady;
  std::optional<SweepSpec> sweep;
  std::string output_path = "out.csv";
  ThermalConvention thermal_convention = ThermalConvention::single_rate;
  CavityLinewidthMap linewidth_map = CavityLinewidthMap::identity;
  std::uint64_t seed = 0;  // reserved; every run is deterministic
  bool record_timing = false;
  bool truncation_check = false;
};

/// Validates and converts a JSON document. Throws Error(kind=config).
RunConfig parse_config(const nlohmann::json& doc);

nlohmann::json load_json_file(const std::filesystem::path& path);

/// Applies "a.b.c=value"; the value is parsed as JSON when possible and
/// taken as a string otherwise. A JSON null removes the key.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Sets one named physical parameter; "K_g" rewrites g1 from the current g2.
void set_parameter(SystemParams& p, std::string_view name, double value);
double get_parameter(const SystemParams& p, std::string_view name);

nlohmann::json params_to_json(const SystemParams& p);

}  // namespace nonrecip
