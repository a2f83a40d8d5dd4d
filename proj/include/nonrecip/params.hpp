#pragma once

namespace nonrecip {

/// Physical parameters of the three-mode system in dimensionless units,
/// already in the frame rotating at the drive (only the detuning appears).
struct SystemParams {
  double omega_a = 1.0;
  double omega_b = 1.0;
  double delta = 1.0;  // cavity detuning, omega_c - omega_L
  double gamma = 1.0;  // cavity decay
  double g = 0.0;      // linearized cavity-A coupling
  double g1 = 0.0;     // symmetric part of the A-B coupling
  double g2 = 0.0;     // antisymmetric part
  double kappa_a = 0.0;
  double kappa_b = 0.0;
  double nbar_a = 0.0;
  double nbar_b = 0.0;

  double g_ab() const noexcept { return g1 - g2; }
  double g_ba() const noexcept { return g1 + g2; }

  /// Throws invalid_parameter for negative rates/occupations or non-finite values.
  void validate() const;
};

/// Degree of nonreciprocity K_g = (g1+g2)/(g1-g2). Reciprocal coupling
/// (g2 = 0) is flagged separately and carries value 1.
struct NonreciprocityKg {
  double value = 1.0;
  bool reciprocal = true;
};

NonreciprocityKg kg_from_params(double g1, double g2);
/// Inverse map g1 = g2 (K_g + 1)/(K_g - 1); requires K_g > 1.
double g1_from_kg(double kg, double g2);

}  // namespace nonrecip
