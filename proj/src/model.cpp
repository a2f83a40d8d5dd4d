#include "nonrecip/model.hpp"

#include <string>

#include "nonrecip/error.hpp"

namespace nonrecip {

namespace {

void require_arity(const Dims& dims, std::size_t n, const char* what) {
  if (dims.size() != n)
    fail_usage("dimension_mismatch", std::string(what) + " needs " + std::to_string(n) +
                                         " mode dimensions, got " + std::to_string(dims.size()));
  for (int d : dims) ModeSpace{d};
}

struct Ladder {
  QOperator lower;
  QOperator raise;
  QOperator num;
};

Ladder ladder(const Dims& dims, std::size_t mode) {
  const ModeSpace m{dims[mode]};
  return {embed(annihilation(m), mode, dims), embed(creation(m), mode, dims),
          embed(number(m), mode, dims)};
}

void push_if_positive(std::vector<DissipatorSpec>& out, const QOperator& j, double rate) {
  if (rate > 0.0) out.push_back({j, rate});
}

}  // namespace

QOperator hamiltonian_three_mode(const SystemParams& p, const Dims& dims) {
  require_arity(dims, 3, "three-mode Hamiltonian");
  const Ladder a = ladder(dims, 0), b = ladder(dims, 1), c = ladder(dims, 2);
  return c.num * (-p.delta) + a.num * p.omega_a + b.num * p.omega_b +
         (a.lower * b.raise) * p.g_ab() + (a.raise * b.lower) * p.g_ba() +
         (a.raise * c.lower + a.lower * c.raise) * p.g;
}

QOperator hamiltonian_cavity_A(const SystemParams& p, const Dims& dims) {
  require_arity(dims, 2, "cavity-A Hamiltonian");
  const Ladder a = ladder(dims, 0), c = ladder(dims, 1);
  return c.num * (-p.delta) + a.num * p.omega_a + (a.raise * c.lower + a.lower * c.raise) * p.g;
}

QOperator hamiltonian_A_B(const SystemParams& p, const Dims& dims) {
  require_arity(dims, 2, "A-B Hamiltonian");
  const Ladder a = ladder(dims, 0), b = ladder(dims, 1);
  return a.num * p.omega_a + b.num * p.omega_b + (a.lower * b.raise) * p.g_ab() +
         (a.raise * b.lower) * p.g_ba();
}

std::vector<DissipatorSpec> dissipators_three_mode(const SystemParams& p, const Dims& dims) {
  require_arity(dims, 3, "three-mode dissipators");
  const Ladder a = ladder(dims, 0), b = ladder(dims, 1), c = ladder(dims, 2);
  std::vector<DissipatorSpec> out;
  push_if_positive(out, a.lower, (1.0 + p.nbar_a) * p.kappa_a);
  push_if_positive(out, a.raise, p.nbar_a * p.kappa_a);
  push_if_positive(out, b.lower, (1.0 + p.nbar_b) * p.kappa_b);
  push_if_positive(out, b.raise, p.nbar_b * p.kappa_b);
  push_if_positive(out, c.lower, p.gamma);
  return out;
}

ReducedTwoModeModel reduced_two_mode(const SystemParams& p, const EffectiveBath& eff) {
  const double s = eff.kappa_a_eff + p.kappa_b;
  if (s == 0.0) fail_solver("singular_denominator", "kappa_a_eff + kappa_b vanishes");
  ReducedTwoModeModel m;
  m.shifted_omega_a = p.omega_a + (2.0 * p.g2 * p.g2 - 2.0 * p.g1 * p.g2) / s;
  m.shifted_omega_b = p.omega_b + (2.0 * p.g2 * p.g2 + 2.0 * p.g1 * p.g2) / s;
  m.cross_kerr = 4.0 * p.g2 * p.g2 / s;
  m.rate_up = (p.g1 + p.g2) * (p.g1 + p.g2) / s;
  m.rate_down = (p.g1 - p.g2) * (p.g1 - p.g2) / s;
  m.kappa_a_eff = eff.kappa_a_eff;
  m.nbar_a_eff = eff.nbar_a_eff;
  m.kappa_b = p.kappa_b;
  m.nbar_b = p.nbar_b;
  return m;
}

QOperator hamiltonian_reduced(const ReducedTwoModeModel& m, const Dims& dims) {
  require_arity(dims, 2, "reduced Hamiltonian");
  const Ladder a = ladder(dims, 0), b = ladder(dims, 1);
  return a.num * m.shifted_omega_a + b.num * m.shifted_omega_b + (a.num * b.num) * m.cross_kerr;
}

std::vector<DissipatorSpec> dissipators_reduced(const ReducedTwoModeModel& m, const Dims& dims) {
  require_arity(dims, 2, "reduced dissipators");
  const Ladder a = ladder(dims, 0), b = ladder(dims, 1);
  std::vector<DissipatorSpec> out;
  push_if_positive(out, a.lower, (1.0 + m.nbar_a_eff) * m.kappa_a_eff);
  push_if_positive(out, a.raise, m.nbar_a_eff * m.kappa_a_eff);
  push_if_positive(out, b.lower, (1.0 + m.nbar_b) * m.kappa_b);
  push_if_positive(out, b.raise, m.nbar_b * m.kappa_b);
  push_if_positive(out, a.raise * b.lower, m.rate_up);
  push_if_positive(out, a.lower * b.raise, m.rate_down);
  return out;
}

}  // namespace nonrecip
