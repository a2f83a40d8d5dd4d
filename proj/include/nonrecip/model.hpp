#pragma once
// Hamiltonians and dissipators for the three-mode system, its cavity-A and
// A-B subsystems, and the reduced two-mode Lindblad model obtained after
// eliminating the cavity and the coherent A-B exchange.

#include <vector>

#include "nonrecip/analytic.hpp"
#include "nonrecip/operator.hpp"
#include "nonrecip/params.hpp"

namespace nonrecip {

/// rate * D_J(rho) with D_J(rho) = 2 J rho J^dag - J^dag J rho - rho J^dag J.
struct DissipatorSpec {
  QOperator jump;
  double rate;
};

/// H = -Δ c†c + ω_a a†a + ω_b b†b + g_ab a b† + g_ba a† b + g (a† c + a c†),
/// on dims (A, B, cavity). Non-Hermitian whenever g2 != 0.
QOperator hamiltonian_three_mode(const SystemParams& p, const Dims& dims);

/// Linearized optomechanical pair on dims (A, cavity).
QOperator hamiltonian_cavity_A(const SystemParams& p, const Dims& dims);

/// Mechanical pair on dims (A, B): ω_a a†a + ω_b b†b + g_ab a b† + g_ba a† b.
QOperator hamiltonian_A_B(const SystemParams& p, const Dims& dims);

/// Thermal baths on A and B plus cavity decay; zero-rate terms are omitted.
/// Order: a, a†, b, b†, c.
std::vector<DissipatorSpec> dissipators_three_mode(const SystemParams& p, const Dims& dims);

struct ReducedTwoModeModel {
  double shifted_omega_a = 0.0;
  double shifted_omega_b = 0.0;
  double cross_kerr = 0.0;  // coefficient of a†a b†b
  double rate_up = 0.0;     // jump a† b
  double rate_down = 0.0;   // jump a b†
  double kappa_a_eff = 0.0;
  double nbar_a_eff = 0.0;
  double kappa_b = 0.0;
  double nbar_b = 0.0;
};

ReducedTwoModeModel reduced_two_mode(const SystemParams& p, const EffectiveBath& eff);

/// Hermitian Hamiltonian of the reduced model on dims (A, B).
QOperator hamiltonian_reduced(const ReducedTwoModeModel& m, const Dims& dims);
/// Effective bath on A, intrinsic bath on B and the two correlated jumps.
std::vector<DissipatorSpec> dissipators_reduced(const ReducedTwoModeModel& m, const Dims& dims);

}  // namespace nonrecip
