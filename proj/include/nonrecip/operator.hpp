#pragma once
// Sparse operators on truncated tensor-product Fock spaces.
//
// Composite spaces are ordered (A, B, cavity) throughout the library. Every
// operator and density matrix carries the list of mode dimensions so that
// mixing operators from different spaces fails loudly instead of silently
// producing a transposed or mis-sized result.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstddef>
#include <vector>

namespace nonrecip {

using cplx = std::complex<double>;
using SparseMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor, int>;
using DenseMat = Eigen::MatrixXcd;
using Dims = std::vector<int>;

/// Product of the mode dimensions.
Eigen::Index total_dim(const Dims& dims);

/// Single bosonic mode truncated to |0>..|dim-1>.
struct ModeSpace {
  int dim;
  explicit ModeSpace(int d);
};

/// Kronecker product of two sparse matrices, A ⊗ B.
SparseMat kron(const SparseMat& a, const SparseMat& b);

class QOperator {
 public:
  QOperator(Dims dims, SparseMat data);

  const Dims& dims() const noexcept { return dims_; }
  const SparseMat& data() const noexcept { return data_; }
  Eigen::Index side() const noexcept { return data_.rows(); }

  DenseMat dense() const { return DenseMat(data_); }
  QOperator adjoint() const;

  QOperator operator+(const QOperator& rhs) const;
  QOperator operator-(const QOperator& rhs) const;
  QOperator operator*(const QOperator& rhs) const;
  QOperator operator*(cplx s) const;
  friend QOperator operator*(cplx s, const QOperator& op) { return op * s; }

 private:
  Dims dims_;
  SparseMat data_;
};

QOperator identity(ModeSpace space);
QOperator identity(const Dims& dims);
QOperator annihilation(ModeSpace space);
QOperator creation(ModeSpace space);
QOperator number(ModeSpace space);

/// Kronecker product with dims concatenated (x.dims ++ y.dims).
QOperator tensor(const QOperator& x, const QOperator& y);

/// Places a single-mode operator at position `mode` of a composite space,
/// with identities on every other factor.
QOperator embed(const QOperator& single, std::size_t mode, const Dims& dims);

/// Throws dimension_mismatch unless the two dimension lists are equal.
void require_same_dims(const Dims& a, const Dims& b, const char* where);

class DensityMatrix {
 public:
  DensityMatrix(Dims dims, DenseMat data);

  /// Product Fock state |n_0, n_1, ...><n_0, n_1, ...|.
  static DensityMatrix fock(const Dims& dims, const std::vector<int>& occupations);
  /// Product of truncated thermal states, each renormalized on its mode.
  static DensityMatrix thermal(const Dims& dims, const std::vector<double>& nbar);
  /// Maximally mixed state I/D.
  static DensityMatrix maximally_mixed(const Dims& dims);

  const Dims& dims() const noexcept { return dims_; }
  const DenseMat& data() const noexcept { return data_; }
  DenseMat& data() noexcept { return data_; }
  Eigen::Index side() const noexcept { return data_.rows(); }

  cplx trace() const { return data_.trace(); }
  /// max |rho - rho^dagger| elementwise.
  double hermiticity_defect() const;

  /// (rho + rho^dagger)/2 then divide by the real trace.
  DensityMatrix hermitized_normalized() const;

 private:
  Dims dims_;
  DenseMat data_;
};

/// Tr[rho X] via the sparse operator.
cplx expectation(const DensityMatrix& rho, const QOperator& x);
/// Tr[rho X] via a dense operator of matching side.
cplx expectation(const DensityMatrix& rho, const DenseMat& x);

/// <n_m> for every mode m, read off the diagonal of rho.
std::vector<double> mode_occupations(const DensityMatrix& rho);

}  // namespace nonrecip
