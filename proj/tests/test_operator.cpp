#include <cmath>
#include <random>

#include "doctest.h"
#include "nonrecip/error.hpp"
#include "nonrecip/operator.hpp"
#include "support.hpp"

using namespace nonrecip;
using testing::max_abs;

TEST_CASE("annihilation operator entries") {
  const DenseMat a2 = annihilation(ModeSpace(2)).dense();
  DenseMat expect2(2, 2);
  expect2 << 0, 1, 0, 0;
  CHECK(max_abs(a2 - expect2) == 0.0);

  const DenseMat a3 = annihilation(ModeSpace(3)).dense();
  CHECK(a3(0, 1) == cplx{1.0, 0.0});
  CHECK(std::abs(a3(1, 2) - std::sqrt(2.0)) < 1e-15);
  CHECK(a3.cwiseAbs().sum() == doctest::Approx(1.0 + std::sqrt(2.0)));

  const ModeSpace s4(4);
  const DenseMat n = (creation(s4) * annihilation(s4)).dense();
  for (int k = 0; k < 4; ++k) CHECK(std::abs(n(k, k) - static_cast<double>(k)) < 1e-14);
  CHECK(max_abs(n - DenseMat(n.diagonal().asDiagonal())) < 1e-15);
  CHECK(max_abs(n - number(s4).dense()) < 1e-14);
}

TEST_CASE("mode dimension below two is rejected") {
  CHECK_THROWS_AS(ModeSpace(1), Error);
  try {
    ModeSpace bad(0);
  } catch (const Error& e) {
    CHECK(e.code() == "invalid_dimension");
  }
}

TEST_CASE("commutator carries the truncation artifact on the last level") {
  for (int d : {2, 3, 5, 8}) {
    const ModeSpace s(d);
    const DenseMat c = (annihilation(s) * creation(s) - creation(s) * annihilation(s)).dense();
    DenseMat expect = DenseMat::Identity(d, d);
    expect(d - 1, d - 1) = -(d - 1.0);
    CHECK(max_abs(c - expect) < 1e-13);
  }
}

TEST_CASE("tensor products") {
  CHECK(max_abs(tensor(identity(ModeSpace(2)), identity(ModeSpace(3))).dense() -
                DenseMat::Identity(6, 6)) == 0.0);

  const QOperator a_left = tensor(annihilation(ModeSpace(2)), identity(ModeSpace(2)));
  CHECK(a_left.dims() == Dims{2, 2});
  // |1,0> is basis index 2, |0,0> is index 0
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v[2] = 1.0;
  const Eigen::VectorXcd w = a_left.data() * v;
  CHECK(std::abs(w[0] - cplx{1.0, 0.0}) < 1e-15);
  CHECK(w.cwiseAbs().sum() == doctest::Approx(1.0));

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const DenseMat s = testing::random_matrix(2, rng);
    const DenseMat t = testing::random_matrix(2, rng);
    const QOperator qs({2}, s.sparseView());
    const QOperator qt({2}, t.sparseView());
    const cplx tr = tensor(qs, qt).dense().trace();
    CHECK(std::abs(tr - s.trace() * t.trace()) < 1e-12);
    // hand-expanded 4x4 Kronecker oracle
    DenseMat k(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int p = 0; p < 2; ++p)
          for (int q = 0; q < 2; ++q) k(2 * i + p, 2 * j + q) = s(i, j) * t(p, q);
    CHECK(max_abs(tensor(qs, qt).dense() - k) < 1e-14);
  }
}

TEST_CASE("tensor is associative") {
  std::mt19937_64 rng(5);
  const QOperator x({2}, testing::random_matrix(2, rng).sparseView());
  const QOperator y({3}, testing::random_matrix(3, rng).sparseView());
  const QOperator z({2}, testing::random_matrix(2, rng).sparseView());
  const QOperator l = tensor(tensor(x, y), z);
  const QOperator r = tensor(x, tensor(y, z));
  CHECK(l.dims() == r.dims());
  CHECK(max_abs(l.dense() - r.dense()) < 1e-14);
}

TEST_CASE("adjoint properties") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const QOperator x({3}, testing::random_matrix(3, rng).sparseView());
    const QOperator y({3}, testing::random_matrix(3, rng).sparseView());
    CHECK(max_abs(x.adjoint().adjoint().dense() - x.dense()) == 0.0);
    CHECK(max_abs((x * y).adjoint().dense() - (y.adjoint() * x.adjoint()).dense()) < 1e-13);
  }
}

TEST_CASE("operator algebra rejects mismatched dims") {
  const QOperator a = identity(Dims{2, 3});
  const QOperator b = identity(Dims{3, 2});
  CHECK_THROWS_AS(a + b, Error);
  CHECK_THROWS_AS(a * b, Error);
  CHECK_THROWS_AS(QOperator(Dims{2, 2}, SparseMat(3, 3)), Error);
}

TEST_CASE("expectation values") {
  const ModeSpace s(4);
  CHECK(std::abs(expectation(DensityMatrix::fock({4}, {2}), number(s)) - 2.0) < 1e-15);
  CHECK(std::abs(expectation(DensityMatrix::maximally_mixed({4}), number(s)) - 1.5) < 1e-15);

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const DensityMatrix rho({2, 3}, testing::random_hermitian(6, rng));
    const DenseMat xd = testing::random_hermitian(6, rng);
    const QOperator x({2, 3}, xd.sparseView());
    const cplx oracle = (rho.data() * xd).trace();
    CHECK(std::abs(expectation(rho, x) - oracle) < 1e-12);
    CHECK(std::abs(expectation(rho, xd) - oracle) < 1e-12);
    CHECK(std::abs(expectation(rho, identity(Dims{2, 3})) - rho.data().trace()) < 1e-12);
  }
  CHECK_THROWS_AS(expectation(DensityMatrix::maximally_mixed({4}), number(ModeSpace(3))), Error);
}

TEST_CASE("embedded number operators match mode occupations") {
  const Dims dims{3, 4, 2};
  std::mt19937_64 rng(4);
  const DensityMatrix rho(dims, testing::random_density(24, rng));
  const auto occ = mode_occupations(rho);
  for (std::size_t m = 0; m < dims.size(); ++m) {
    const QOperator n = embed(number(ModeSpace(dims[m])), m, dims);
    CHECK(std::abs(expectation(rho, n).real() - occ[m]) < 1e-12);
  }
}

TEST_CASE("density matrix factories") {
  const DensityMatrix f = DensityMatrix::fock({6, 8, 4}, {0, 2, 0});
  const auto occ = mode_occupations(f);
  CHECK(occ[0] == 0.0);
  CHECK(occ[1] == 2.0);
  CHECK(occ[2] == 0.0);
  CHECK_THROWS_AS(DensityMatrix::fock({2, 2, 2}, {0, 2, 0}), Error);

  const DensityMatrix th = DensityMatrix::thermal({40, 3}, {0.5, 0.0});
  CHECK(std::abs(th.trace() - 1.0) < 1e-14);
  CHECK(mode_occupations(th)[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(mode_occupations(th)[1] == 0.0);

  DenseMat raw = DenseMat::Zero(2, 2);
  raw(0, 0) = 2.0;
  raw(0, 1) = cplx{0.0, 1.0};
  const DensityMatrix fixed = DensityMatrix({2}, raw).hermitized_normalized();
  CHECK(std::abs(fixed.trace() - 1.0) < 1e-12);
  CHECK(fixed.hermiticity_defect() < 1e-12);
  CHECK_THROWS_AS(DensityMatrix({2}, DenseMat::Zero(2, 2)).hermitized_normalized(), Error);
}
