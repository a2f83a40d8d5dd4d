#include <cmath>

#include "doctest.h"
#include "nonrecip/analytic.hpp"
#include "nonrecip/error.hpp"
#include "nonrecip/model.hpp"
#include "nonrecip/steadystate.hpp"

using namespace nonrecip;

namespace {

Liouvillian damped_mode(int dim, double kappa, double nbar) {
  const ModeSpace s(dim);
  return build(number(s), {{annihilation(s), (1 + nbar) * kappa}, {creation(s), nbar * kappa}},
               false);
}

// n for a thermal state truncated to dim levels
double truncated_thermal_n(int dim, double nbar) {
  const double r = nbar / (1 + nbar);
  double z = 0.0, n = 0.0, w = 1.0;
  for (int k = 0; k < dim; ++k, w *= r) {
    z += w;
    n += k * w;
  }
  return n / z;
}

void check_physical(const SteadyStateResult& r) {
  CHECK(std::abs(r.rho_ss.trace() - 1.0) < 1e-12);
  CHECK(r.rho_ss.hermiticity_defect() < 1e-12);
}

}  // namespace

TEST_CASE("single damped mode against the dense oracle") {
  const Liouvillian l = damped_mode(6, 0.1, 0.5);
  const SteadyStateResult sp = solve_sparse(l);
  const SteadyStateResult dn = solve_dense_oracle(l);
  check_physical(sp);
  check_physical(dn);
  CHECK(std::abs(sp.n_a - dn.n_a) < 1e-10);
  CHECK(std::abs(sp.n_a - truncated_thermal_n(6, 0.5)) < 1e-10);
  CHECK(sp.n_a < 0.5);
  CHECK(sp.n_a > 0.45);
  CHECK(sp.residual < 1e-12);
  CHECK(sp.repair_magnitude < 1e-6);
  CHECK(dn.zero_gap > 1e-8);
  CHECK(sp.method == "sparse_lu");
  CHECK(dn.method == "dense_eig");
}

TEST_CASE("row policies give the same state") {
  const Liouvillian l = damped_mode(6, 0.1, 0.5);
  SteadyStateOptions first;
  first.row_policy = RowPolicy::first;
  CHECK(which_row(l, RowPolicy::first) == 0);
  const Eigen::Index best = which_row(l, RowPolicy::largest_diagonal);
  CHECK(best % 7 == 0);  // a diagonal entry i + i*D with D = 6
  CHECK(best != 0);
  const SteadyStateResult a = solve_sparse(l);
  const SteadyStateResult b = solve_sparse(l, first);
  CHECK((a.rho_ss.data() - b.rho_ss.data()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(parse_row_policy("first") == RowPolicy::first);
  CHECK_THROWS_AS(parse_row_policy("last"), Error);
}

TEST_CASE("ill-scaled rates favour the largest-diagonal row") {
  // rates spanning 1e-4 .. 1 over A, B and the cavity
  SystemParams p;
  p.g = 0.05;
  p.g1 = 0.02;
  p.kappa_a = 1e-4;
  p.kappa_b = 1e-3;
  p.nbar_a = 0.5;
  p.nbar_b = 0.3;
  const Dims dims{4, 4, 2};
  const Liouvillian l = build(hamiltonian_three_mode(p, dims), dissipators_three_mode(p, dims), false);
  SteadyStateOptions first;
  first.row_policy = RowPolicy::first;
  const SteadyStateResult big = solve_sparse(l);
  const SteadyStateResult low = solve_sparse(l, first);
  CAPTURE(big.residual);
  CAPTURE(low.residual);
  CHECK(big.residual <= low.residual * (1.0 + 1e-9) + 1e-16);
}

TEST_CASE("decoupled thermal baths") {
  SystemParams p;
  p.gamma = 1.0;
  p.kappa_a = 0.01;
  p.kappa_b = 0.02;
  p.nbar_a = p.nbar_b = 1.0;
  const Dims dims{8, 8, 2};
  const SteadyStateResult r =
      solve_sparse(build(hamiltonian_three_mode(p, dims), dissipators_three_mode(p, dims), false));
  check_physical(r);
  // dim 8 at n=1 loses the thermal tail above |7>; the truncated Gibbs value is exact
  CHECK(std::abs(r.n_a - truncated_thermal_n(8, 1.0)) < 1e-10);
  CHECK(std::abs(r.n_b - truncated_thermal_n(8, 1.0)) < 1e-10);
  CHECK(std::abs(r.n_c) < 1e-12);
}

TEST_CASE("unitary Liouvillian has a degenerate null space") {
  const Liouvillian l = build(number(ModeSpace(4)), {}, false);
  try {
    (void)solve_dense_oracle(l);
    FAIL("expected degenerate_steady_state");
  } catch (const Error& e) {
    CHECK(e.code() == "degenerate_steady_state");
  }
}

TEST_CASE("guards") {
  const ModeSpace s(3);
  const Liouvillian nl = build(number(s), {{annihilation(s), 0.1}}, true);
  CHECK_THROWS_AS(solve_sparse(nl), Error);
  CHECK_THROWS_AS(solve_dense_oracle(nl), Error);
  const Liouvillian big = damped_mode(65, 0.1, 0.0);
  try {
    (void)solve_dense_oracle(big);
    FAIL("expected oracle_too_large");
  } catch (const Error& e) {
    CHECK(e.code() == "oracle_too_large");
  }
}

TEST_CASE("iterative route agrees with the direct route") {
  SystemParams p;
  p.g = 0.05;
  p.g1 = 0.02;
  p.kappa_a = 0.01;
  p.kappa_b = 0.01;
  p.nbar_a = 1.0;
  p.nbar_b = 0.5;
  const Dims dims{5, 5, 2};
  const Liouvillian l = build(hamiltonian_three_mode(p, dims), dissipators_three_mode(p, dims), false);
  SteadyStateOptions it;
  it.solver = LinearSolver::iterative;
  const SteadyStateResult a = solve_sparse(l);
  const SteadyStateResult b = solve_sparse(l, it);
  CHECK(b.method == "gmres_ilut");
  CHECK(std::abs(a.n_a - b.n_a) < 1e-8);
  CHECK(std::abs(a.n_b - b.n_b) < 1e-8);
}

TEST_CASE("reduced two-mode model tracks the full model at weak coupling") {
  // reciprocal coupling keeps the full Liouvillian trace preserving
  SystemParams p;
  p.g = 0.05;
  p.g1 = 0.002;
  p.kappa_a = p.kappa_b = 0.01;
  p.nbar_a = p.nbar_b = 2.0;
  const SteadyStateResult full = solve_sparse(
      build(hamiltonian_three_mode(p, {6, 6, 3}), dissipators_three_mode(p, {6, 6, 3}), false));
  const ReducedTwoModeModel m = reduced_two_mode(p, effective_bath(p));
  const SteadyStateResult red =
      solve_sparse(build(hamiltonian_reduced(m, {6, 6}), dissipators_reduced(m, {6, 6}), false));
  CAPTURE(full.n_b);
  CAPTURE(red.n_b);
  CHECK(std::abs(full.n_b - red.n_b) < 0.05 * full.n_b);
}
