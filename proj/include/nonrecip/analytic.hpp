#pragma once
// Closed-form chain for the steady-state phonon numbers: cavity sideband
// rates, the effective bath seen by particle A, the mean-field rate equations
// for (n_a, n_b) and their stationary quadratics.

#include <cstddef>
#include <string_view>
#include <vector>

#include "nonrecip/params.hpp"

namespace nonrecip {

/// Thermal relaxation term of the rate equations: kappa (nbar - n), or
/// 2 kappa (nbar - n) as implied by the factor-2 dissipator.
enum class ThermalConvention { single_rate, lindblad_2k };

/// Linewidth entering the sideband rates: gamma itself, or 2 gamma (the
/// energy decay rate of gamma D_c).
enum class CavityLinewidthMap { identity, twice };

ThermalConvention parse_thermal_convention(std::string_view s);
CavityLinewidthMap parse_linewidth_map(std::string_view s);
std::string_view to_string(ThermalConvention c);
std::string_view to_string(CavityLinewidthMap m);

struct SidebandRates {
  double a_minus = 0.0;  // anti-Stokes (cooling)
  double a_plus = 0.0;   // Stokes (heating)
};

struct EffectiveBath {
  double gamma_opt = 0.0;
  double n_opt = 0.0;
  double kappa_a_eff = 0.0;
  double nbar_a_eff = 0.0;
};

/// A∓ = g² γ / ((Δ ∓ ω_a)² + (γ/2)²). Throws zero_linewidth for γ <= 0.
SidebandRates sideband_rates(const SystemParams& p,
                             CavityLinewidthMap map = CavityLinewidthMap::identity);

/// Optical damping and occupation folded into particle A's bath. With g = 0
/// the cavity is decoupled and A keeps its intrinsic bath.
EffectiveBath effective_bath(const SystemParams& p, const SidebandRates& r);
EffectiveBath effective_bath(const SystemParams& p,
                             CavityLinewidthMap map = CavityLinewidthMap::identity);

/// Everything the two-variable rate equations depend on.
struct MeanFieldInputs {
  double g1 = 0.0;
  double g2 = 0.0;
  EffectiveBath eff;
  double kappa_b = 0.0;
  double nbar_b = 0.0;

  double denom() const noexcept { return eff.kappa_a_eff + kappa_b; }
  /// 2 (g1+g2)² / (κ_a' + κ_b), transfer B -> A.
  double rate_up() const noexcept;
  /// 2 (g1-g2)² / (κ_a' + κ_b), transfer A -> B.
  double rate_down() const noexcept;
};

MeanFieldInputs mean_field_inputs(const SystemParams& p, const EffectiveBath& eff);

struct MeanFieldState {
  double n_a = 0.0;
  double n_b = 0.0;
};

struct MeanFieldDerivative {
  double dn_a = 0.0;
  double dn_b = 0.0;
};

MeanFieldDerivative mean_field_rhs(const MeanFieldState& s, const MeanFieldInputs& in,
                                   ThermalConvention conv = ThermalConvention::single_rate);

struct QuadraticCoeffs {
  // particle B: A n_b² + B n_b + C = 0
  double A = 0.0, B = 0.0, C = 0.0;
  // particle A: D n_a² + E n_a + F = 0
  double D = 0.0, E = 0.0, F = 0.0;
};

/// Coefficients of the stationary quadratics of the rate equations.
/// Requires κ_a' + κ_b > 0 and κ_a' > 0; D/E/F additionally need κ_b > 0
/// and are left as NaN otherwise.
QuadraticCoeffs quadratic_coeffs(const MeanFieldInputs& in);

struct QuadraticRoot {
  double value = 0.0;    // real part
  double imag = 0.0;     // nonzero for a complex pair
  double partner = 0.0;  // the other particle's occupation at this root
  bool real = true;
  bool physical = false;
};

struct RootSet {
  std::vector<QuadraticRoot> roots;
  bool degenerate = false;  // leading coefficient vanished; linear branch
  std::size_t selected = 0;

  double value() const { return roots.at(selected).value; }
  double partner() const { return roots.at(selected).partner; }
};

/// Stationary n_b. Throws no_physical_steady_state if no root qualifies.
RootSet steady_quadratic_b(const MeanFieldInputs& in);
/// Stationary n_a.
RootSet steady_quadratic_a(const MeanFieldInputs& in);

enum class MeanFieldMethod { rk4, rosenbrock };

struct MeanFieldOptions {
  MeanFieldMethod method = MeanFieldMethod::rk4;
  double dt = 0.01;            // fixed step (rk4) or initial step (rosenbrock)
  double rel_tol = 1e-9;       // rosenbrock only
  double abs_tol = 1e-12;      // rosenbrock only
  std::size_t record_every = 0;  // 0 records only the endpoints
  double stop_rhs_below = 0.0;   // stop early once max |dn/dt| drops below this
  ThermalConvention convention = ThermalConvention::single_rate;
};

struct MeanFieldSample {
  double t = 0.0;
  MeanFieldState state;
};

/// Integrates the rate equations. Rosenbrock (linearly implicit, adaptive)
/// handles stiff parameter sets where the transfer rates dwarf κ.
/// Throws mean_field_instability if an occupation exceeds 1e12.
std::vector<MeanFieldSample> mean_field_integrate(const MeanFieldState& initial,
                                                  const MeanFieldInputs& in, double t_final,
                                                  const MeanFieldOptions& opt = {});

struct AnalyticSteadyState {
  double n_a = 0.0;
  double n_b = 0.0;
};

/// Both quadratics, with ties between physical roots broken by the terminal
/// state of the rate equations started from (n̄_a', n̄_b).
AnalyticSteadyState analytic_steady_state(const MeanFieldInputs& in);

}  // namespace nonrecip
