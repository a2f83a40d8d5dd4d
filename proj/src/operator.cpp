#include "nonrecip/operator.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "nonrecip/error.hpp"

namespace nonrecip {

namespace {

std::string dims_str(const Dims& d) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
  os << ')';
  return os.str();
}

}  // namespace

Eigen::Index total_dim(const Dims& dims) {
  Eigen::Index n = 1;
  for (int d : dims) n *= d;
  return n;
}

ModeSpace::ModeSpace(int d) : dim(d) {
  if (d < 2) fail_usage("invalid_dimension", "mode dimension must be >= 2, got " + std::to_string(d));
}

void require_same_dims(const Dims& a, const Dims& b, const char* where) {
  if (a != b)
    fail_usage("dimension_mismatch",
               std::string(where) + ": dims " + dims_str(a) + " vs " + dims_str(b));
}

SparseMat kron(const SparseMat& a, const SparseMat& b) {
  const Eigen::Index br = b.rows(), bc = b.cols();
  SparseMat out(a.rows() * br, a.cols() * bc);
  // Row-major output can be filled row by row in order.
  Eigen::VectorXi nnz_per_row(out.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const int an = a.outerIndexPtr()[i + 1] - a.outerIndexPtr()[i];
    for (Eigen::Index k = 0; k < br; ++k) {
      const int bn = b.outerIndexPtr()[k + 1] - b.outerIndexPtr()[k];
      nnz_per_row[i * br + k] = an * bn;
    }
  }
  out.reserve(nnz_per_row);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < br; ++k) {
      for (SparseMat::InnerIterator ia(a, i); ia; ++ia) {
        for (SparseMat::InnerIterator ib(b, k); ib; ++ib) {
          out.insert(i * br + k, ia.col() * bc + ib.col()) = ia.value() * ib.value();
        }
      }
    }
  }
  out.makeCompressed();
  return out;
}

QOperator::QOperator(Dims dims, SparseMat data) : dims_(std::move(dims)), data_(std::move(data)) {
  const Eigen::Index n = total_dim(dims_);
  if (data_.rows() != n || data_.cols() != n)
    fail_usage("dimension_mismatch", "operator data is " + std::to_string(data_.rows()) + "x" +
                                         std::to_string(data_.cols()) + " but dims " +
                                         dims_str(dims_) + " need side " + std::to_string(n));
  data_.makeCompressed();
}

QOperator QOperator::adjoint() const { return {dims_, SparseMat(data_.adjoint())}; }

QOperator QOperator::operator+(const QOperator& rhs) const {
  require_same_dims(dims_, rhs.dims_, "operator +");
  return {dims_, SparseMat(data_ + rhs.data_)};
}

QOperator QOperator::operator-(const QOperator& rhs) const {
  require_same_dims(dims_, rhs.dims_, "operator -");
  return {dims_, SparseMat(data_ - rhs.data_)};
}

QOperator QOperator::operator*(const QOperator& rhs) const {
  require_same_dims(dims_, rhs.dims_, "operator *");
  return {dims_, SparseMat(data_ * rhs.data_)};
}

QOperator QOperator::operator*(cplx s) const { return {dims_, SparseMat(data_ * s)}; }

QOperator identity(ModeSpace space) { return identity(Dims{space.dim}); }

QOperator identity(const Dims& dims) {
  SparseMat id(total_dim(dims), total_dim(dims));
  id.setIdentity();
  return {dims, std::move(id)};
}

QOperator annihilation(ModeSpace space) {
  SparseMat a(space.dim, space.dim);
  a.reserve(Eigen::VectorXi::Constant(space.dim, 1));
  for (int n = 1; n < space.dim; ++n) a.insert(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {Dims{space.dim}, std::move(a)};
}

QOperator creation(ModeSpace space) { return annihilation(space).adjoint(); }

QOperator number(ModeSpace space) {
  SparseMat n(space.dim, space.dim);
  n.reserve(Eigen::VectorXi::Constant(space.dim, 1));
  for (int k = 1; k < space.dim; ++k) n.insert(k, k) = static_cast<double>(k);
  return {Dims{space.dim}, std::move(n)};
}

QOperator tensor(const QOperator& x, const QOperator& y) {
  Dims d = x.dims();
  d.insert(d.end(), y.dims().begin(), y.dims().end());
  return {std::move(d), kron(x.data(), y.data())};
}

QOperator embed(const QOperator& single, std::size_t mode, const Dims& dims) {
  if (mode >= dims.size() || single.dims().size() != 1 || single.dims()[0] != dims[mode])
    fail_usage("dimension_mismatch", "cannot embed operator on " + dims_str(single.dims()) +
                                         " at mode " + std::to_string(mode) + " of " +
                                         dims_str(dims));
  Dims left(dims.begin(), dims.begin() + static_cast<std::ptrdiff_t>(mode));
  Dims right(dims.begin() + static_cast<std::ptrdiff_t>(mode) + 1, dims.end());
  QOperator out = single;
  if (!left.empty()) out = tensor(identity(left), out);
  if (!right.empty()) out = tensor(out, identity(right));
  return out;
}

DensityMatrix::DensityMatrix(Dims dims, DenseMat data) : dims_(std::move(dims)), data_(std::move(data)) {
  const Eigen::Index n = total_dim(dims_);
  if (data_.rows() != n || data_.cols() != n)
    fail_usage("dimension_mismatch", "density matrix is " + std::to_string(data_.rows()) + "x" +
                                         std::to_string(data_.cols()) + " but dims " +
                                         dims_str(dims_) + " need side " + std::to_string(n));
}

DensityMatrix DensityMatrix::fock(const Dims& dims, const std::vector<int>& occupations) {
  if (occupations.size() != dims.size())
    fail_usage("dimension_mismatch", "Fock state needs one occupation per mode");
  Eigen::Index index = 0;
  for (std::size_t m = 0; m < dims.size(); ++m) {
    if (occupations[m] < 0 || occupations[m] >= dims[m])
      fail_usage("invalid_state", "occupation " + std::to_string(occupations[m]) +
                                      " outside truncation of mode " + std::to_string(m));
    index = index * dims[m] + occupations[m];
  }
  const Eigen::Index n = total_dim(dims);
  DenseMat rho = DenseMat::Zero(n, n);
  rho(index, index) = 1.0;
  return {dims, std::move(rho)};
}

DensityMatrix DensityMatrix::thermal(const Dims& dims, const std::vector<double>& nbar) {
  if (nbar.size() != dims.size())
    fail_usage("dimension_mismatch", "thermal state needs one occupation per mode");
  Eigen::VectorXd diag = Eigen::VectorXd::Ones(1);
  for (std::size_t m = 0; m < dims.size(); ++m) {
    if (nbar[m] < 0) fail_usage("invalid_state", "thermal occupation must be >= 0");
    Eigen::VectorXd p(dims[m]);
    const double ratio = nbar[m] / (1.0 + nbar[m]);
    double w = 1.0;
    for (int k = 0; k < dims[m]; ++k, w *= ratio) p[k] = w;
    p /= p.sum();
    Eigen::VectorXd next(diag.size() * p.size());
    for (Eigen::Index i = 0; i < diag.size(); ++i)
      next.segment(i * p.size(), p.size()) = diag[i] * p;
    diag = std::move(next);
  }
  return {dims, DenseMat(diag.cast<cplx>().asDiagonal())};
}

DensityMatrix DensityMatrix::maximally_mixed(const Dims& dims) {
  const Eigen::Index n = total_dim(dims);
  return {dims, DenseMat::Identity(n, n) / static_cast<double>(n)};
}

double DensityMatrix::hermiticity_defect() const {
  return (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
}

DensityMatrix DensityMatrix::hermitized_normalized() const {
  DenseMat h = 0.5 * (data_ + data_.adjoint());
  const double tr = h.trace().real();
  if (!(std::abs(tr) > 0.0) || !std::isfinite(tr))
    fail_solver("zero_trace", "cannot normalize a density matrix with zero trace");
  h /= tr;
  return {dims_, std::move(h)};
}

cplx expectation(const DensityMatrix& rho, const QOperator& x) {
  require_same_dims(rho.dims(), x.dims(), "expectation");
  // Tr[rho X] = sum_{ij} rho_ji X_ij
  cplx acc{0.0, 0.0};
  const SparseMat& m = x.data();
  for (Eigen::Index i = 0; i < m.outerSize(); ++i)
    for (SparseMat::InnerIterator it(m, i); it; ++it) acc += rho.data()(it.col(), i) * it.value();
  return acc;
}

cplx expectation(const DensityMatrix& rho, const DenseMat& x) {
  if (x.rows() != rho.side() || x.cols() != rho.side())
    fail_usage("dimension_mismatch", "expectation: dense operator side mismatch");
  return (rho.data().transpose().cwiseProduct(x)).sum();
}

std::vector<double> mode_occupations(const DensityMatrix& rho) {
  const Dims& dims = rho.dims();
  std::vector<double> occ(dims.size(), 0.0);
  std::vector<int> digits(dims.size(), 0);
  for (Eigen::Index k = 0; k < rho.side(); ++k) {
    const double p = rho.data()(k, k).real();
    for (std::size_t m = 0; m < dims.size(); ++m) occ[m] += p * digits[m];
    // advance the mixed-radix counter, last mode fastest
    for (std::size_t m = dims.size(); m-- > 0;) {
      if (++digits[m] < dims[m]) break;
      digits[m] = 0;
    }
  }
  return occ;
}

}  // namespace nonrecip
