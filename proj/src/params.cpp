#include "nonrecip/params.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nonrecip/error.hpp"

namespace nonrecip {

void SystemParams::validate() const {
  const double all[] = {omega_a, omega_b, delta, gamma, g, g1, g2, kappa_a, kappa_b, nbar_a, nbar_b};
  for (double v : all)
    if (!std::isfinite(v)) fail_config("invalid_parameter", "parameters must be finite");
  auto nonneg = [](double v, const char* name) {
    if (v < 0.0) fail_config("invalid_parameter", std::string(name) + " must be >= 0");
  };
  nonneg(gamma, "gamma");
  nonneg(kappa_a, "kappa_a");
  nonneg(kappa_b, "kappa_b");
  nonneg(nbar_a, "nbar_a");
  nonneg(nbar_b, "nbar_b");
}

NonreciprocityKg kg_from_params(double g1, double g2) {
  if (g2 == 0.0) return {1.0, true};
  if (g1 == g2) return {std::numeric_limits<double>::infinity(), false};
  return {(g1 + g2) / (g1 - g2), false};
}

double g1_from_kg(double kg, double g2) {
  if (!(kg > 1.0) || !std::isfinite(kg))
    fail_config("invalid_parameter", "K_g must be a finite value > 1");
  return g2 * (kg + 1.0) / (kg - 1.0);
}

}  // namespace nonrecip
