#pragma once
// Runge-Kutta integration of the (possibly nonlinear) master equation with
// phonon numbers and physicality diagnostics recorded along the way.

#include <cstddef>
#include <string_view>
#include <vector>

#include "nonrecip/liouvillian.hpp"
#include "nonrecip/operator.hpp"

namespace nonrecip {

enum class Integrator { rk4, rk45 };

Integrator parse_integrator(std::string_view s);
std::string_view to_string(Integrator m);

struct EvolutionConfig {
  double t_final = 100.0;
  double dt = 0.01;  // fixed step for rk4, initial step for rk45
  Integrator method = Integrator::rk4;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  std::size_t record_every = 1;  // in accepted steps
  double steady_eps = 1e-8;      // sup-norm of dρ/dt below which the state counts as steady
  bool stop_at_steady = false;
  double trace_tolerance = 1e-6;
  bool enforce_trace = true;  // abort when |Tr ρ - 1| exceeds trace_tolerance
  double min_step = 1e-12;    // rk45 rejection floor

  void validate() const;
};

struct Diagnostics {
  double trace = 0.0;
  double min_diag = 0.0;
  double min_eig_herm = 0.0;  // smallest eigenvalue of (ρ + ρ†)/2
};

Diagnostics diagnostics(const DensityMatrix& rho);

struct TrajectoryRecord {
  double t = 0.0;
  // occupations of modes 0, 1, 2; NaN for modes the space does not have
  double n_a = 0.0;
  double n_b = 0.0;
  double n_c = 0.0;
  double trace = 0.0;
  double min_diag = 0.0;
  double min_eig_herm = 0.0;
};

TrajectoryRecord make_record(double t, const DensityMatrix& rho);

struct EvolutionResult {
  std::vector<TrajectoryRecord> records;
  DensityMatrix final_state;
  double final_derivative_norm = 0.0;  // ‖dρ/dt‖∞ at the final state
  bool steady = false;                 // final_derivative_norm < steady_eps
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

/// Integrates from rho0 (unit trace, Hermitian within 1e-10) to t_final, or
/// until steady if cfg.stop_at_steady. Throws trace_drift when the trace
/// leaves tolerance (with enforce_trace) and step_underflow when rk45 hits
/// its rejection floor.
EvolutionResult evolve(const Liouvillian& l, const DensityMatrix& rho0, const EvolutionConfig& cfg);

}  // namespace nonrecip
