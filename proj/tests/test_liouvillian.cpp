#include <cmath>
#include <random>

#include "doctest.h"
#include "nonrecip/error.hpp"
#include "nonrecip/liouvillian.hpp"
#include "support.hpp"

using namespace nonrecip;
using testing::max_abs;

namespace {

SystemParams coupled() {
  SystemParams p;
  p.g = 0.1;
  p.g1 = 0.11;
  p.g2 = 0.1;
  p.kappa_a = p.kappa_b = 0.01;
  p.nbar_a = p.nbar_b = 1.0;
  return p;
}

// -i(Hρ - ρH†) + Σ rate (2JρJ† - J†Jρ - ρJ†J) by dense products
DenseMat matrix_rhs(const QOperator& h, const std::vector<DissipatorSpec>& ds, const DenseMat& rho) {
  const DenseMat hd = h.dense();
  DenseMat out = cplx{0.0, -1.0} * (hd * rho - rho * hd.adjoint());
  for (const auto& d : ds) {
    const DenseMat j = d.jump.dense();
    const DenseMat jdj = j.adjoint() * j;
    out += d.rate * (2.0 * j * rho * j.adjoint() - jdj * rho - rho * jdj);
  }
  return out;
}

}  // namespace

TEST_CASE("vec and unvec use column stacking") {
  DenseMat m(2, 2);
  m << 1, 2, 3, 4;
  const Eigen::VectorXcd v = vec(m);
  CHECK(v[0] == cplx{1.0, 0.0});
  CHECK(v[1] == cplx{3.0, 0.0});
  CHECK(v[2] == cplx{2.0, 0.0});
  CHECK(max_abs(unvec({v.data(), 4}, 2) - m) == 0.0);
  CHECK_THROWS_AS(unvec({v.data(), 3}, 2), Error);
}

TEST_CASE("linear part matches the matrix-form right-hand side") {
  std::mt19937_64 rng(1);
  for (const Dims& dims : {Dims{2, 2, 2}, Dims{3, 2, 2}, Dims{2, 3, 3}}) {
    const SystemParams p = coupled();
    const QOperator h = hamiltonian_three_mode(p, dims);
    const auto ds = dissipators_three_mode(p, dims);
    const Liouvillian l = build(h, ds, false);
    for (int trial = 0; trial < 3; ++trial) {
      const DenseMat rho = testing::random_matrix(h.side(), rng);
      const Eigen::VectorXcd lv = l.linear_part() * vec(rho);
      CHECK(max_abs(unvec({lv.data(), static_cast<std::size_t>(lv.size())}, h.side()) -
                    matrix_rhs(h, ds, rho)) < 1e-10);
    }
  }
}

TEST_CASE("pure unitary generator") {
  SystemParams p = coupled();
  p.g2 = 0.0;
  const Dims dims{2, 3, 2};
  const QOperator h = hamiltonian_three_mode(p, dims);
  const Liouvillian l = build(h, {}, false);
  const DenseMat hd = h.dense();
  const auto d = h.side();
  const DenseMat id = DenseMat::Identity(d, d);
  DenseMat expect(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      expect.block(i * d, j * d, d, d) = id(i, j) * hd - hd(j, i) * id;
  expect *= cplx{0.0, -1.0};
  CHECK(max_abs(DenseMat(l.linear_part()) - expect) < 1e-14);
}

TEST_CASE("single damped mode decays with the factor-2 dissipator") {
  const double kappa = 0.3;
  const QOperator h(Dims{3}, SparseMat(3, 3));
  const Liouvillian l = build(h, {{annihilation(ModeSpace(3)), kappa}}, false);
  const DenseMat out = apply(l, DensityMatrix::fock({3}, {1}));
  DenseMat expect = DenseMat::Zero(3, 3);
  expect(0, 0) = 2.0 * kappa;
  expect(1, 1) = -2.0 * kappa;
  CHECK(max_abs(out - expect) < 1e-15);
}

TEST_CASE("thermal state of a damped mode is stationary") {
  const double kappa = 0.1, nbar = 0.5;
  const int dim = 12;
  const ModeSpace s(dim);
  const QOperator h = number(s);
  const Liouvillian l = build(h, {{annihilation(s), (1 + nbar) * kappa}, {creation(s), nbar * kappa}}, false);
  // truncated Gibbs weights (n/(1+n))^k are still exactly stationary
  CHECK(max_abs(apply(l, DensityMatrix::thermal({dim}, {nbar}))) < 1e-10);
}

TEST_CASE("trace correction") {
  const Dims dims{3, 3, 2};
  const SystemParams p = coupled();
  const QOperator h = hamiltonian_three_mode(p, dims);
  const auto ds = dissipators_three_mode(p, dims);
  const Liouvillian l = build(h, ds, true);
  const Liouvillian lin = build(h, ds, false);
  CHECK(max_abs((l.anti_hermitian_generator() - (h - h.adjoint())).dense()) == 0.0);

  SUBCASE("vanishes on product Fock states") {
    const DensityMatrix rho = DensityMatrix::fock(dims, {1, 0, 0});
    const Eigen::VectorXcd v = vec(rho.data());
    CHECK(std::abs(l.generator_expectation({v.data(), static_cast<std::size_t>(v.size())})) == 0.0);
    CHECK(max_abs(apply(l, rho) - apply(lin, rho)) == 0.0);
  }
  SUBCASE("restores trace preservation") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 5; ++trial) {
      const DensityMatrix rho(dims, testing::random_density(h.side(), rng));
      CHECK(std::abs(apply(l, rho).trace()) < 1e-10);
      // without it the non-Hermitian part leaks trace
      CHECK(std::abs(apply(lin, rho).trace()) > 1e-6);
    }
  }
  SUBCASE("identically zero for Hermitian H") {
    SystemParams q = p;
    q.g2 = 0.0;
    const QOperator hh = hamiltonian_three_mode(q, dims);
    const Liouvillian a = build(hh, ds, true);
    const Liouvillian b = build(hh, ds, false);
    std::mt19937_64 rng(8);
    const DensityMatrix rho(dims, testing::random_density(hh.side(), rng));
    CHECK(max_abs(apply(a, rho) - apply(b, rho)) == 0.0);
  }
}

TEST_CASE("linearity and Hermiticity preservation") {
  const Dims dims{2, 3, 2};
  const SystemParams p = coupled();
  const QOperator h = hamiltonian_three_mode(p, dims);
  const auto ds = dissipators_three_mode(p, dims);
  const Liouvillian lin = build(h, ds, false);
  const Liouvillian nl = build(h, ds, true);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    const DenseMat x = testing::random_matrix(h.side(), rng);
    const DenseMat y = testing::random_matrix(h.side(), rng);
    const cplx s{0.7, -1.2};
    const DenseMat lhs = apply(lin, DensityMatrix(dims, x + s * y));
    const DenseMat rhs = apply(lin, DensityMatrix(dims, x)) + s * apply(lin, DensityMatrix(dims, y));
    CHECK(max_abs(lhs - rhs) < 1e-10);

    const DensityMatrix herm(dims, testing::random_hermitian(h.side(), rng));
    const DenseMat d1 = apply(lin, herm);
    const DenseMat d2 = apply(nl, herm);
    CHECK(max_abs(d1 - d1.adjoint()) < 1e-10);
    CHECK(max_abs(d2 - d2.adjoint()) < 1e-10);
  }
}

TEST_CASE("dims mismatch is rejected") {
  const QOperator h = hamiltonian_three_mode(coupled(), {2, 2, 2});
  CHECK_THROWS_AS(build(h, {{annihilation(ModeSpace(3)), 0.1}}, false), Error);
  const Liouvillian l = build(h, {}, false);
  CHECK_THROWS_AS(apply(l, DensityMatrix::maximally_mixed({2, 2, 3})), Error);
}
