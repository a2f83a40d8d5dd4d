#pragma once
// Shared helpers for the unit tests.

#include <cmath>
#include <complex>
#include <random>

#include "nonrecip/operator.hpp"

namespace testing {

using nonrecip::cplx;
using nonrecip::DenseMat;

inline DenseMat random_matrix(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  DenseMat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx{nd(rng), nd(rng)};
  return m;
}

inline DenseMat random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const DenseMat m = random_matrix(n, rng);
  return 0.5 * (m + m.adjoint());
}

/// Random positive unit-trace density matrix.
inline DenseMat random_density(Eigen::Index n, std::mt19937_64& rng) {
  const DenseMat m = random_matrix(n, rng);
  DenseMat rho = m * m.adjoint();
  return rho / rho.trace();
}

inline double max_abs(const DenseMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace testing
