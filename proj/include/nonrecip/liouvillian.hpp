#pragma once
// Right-hand side of the three-mode master equation in column-stacked form,
//   vec(AXB) = (B^T ⊗ A) vec(X),
// with an optional nonlinear trace-correction term i Tr[ρ(H - H†)] ρ.

#include <span>
#include <utility>
#include <vector>

#include "nonrecip/kernels.hpp"
#include "nonrecip/model.hpp"
#include "nonrecip/operator.hpp"

namespace nonrecip {

class Liouvillian {
 public:
  const Dims& dims() const noexcept { return dims_; }
  Eigen::Index hilbert_dim() const noexcept { return generator_.side(); }
  /// D² x D² matrix acting on vec(ρ).
  const SparseMat& linear_part() const noexcept { return linear_; }
  /// H - H†; drives the trace correction.
  const QOperator& anti_hermitian_generator() const noexcept { return generator_; }
  bool include_trace_correction() const noexcept { return correction_; }

  /// Tr[ρ (H - H†)] evaluated directly on vec(ρ).
  cplx generator_expectation(std::span<const cplx> vec_rho) const;

  /// out = linear_part · x, plus i Tr[ρ(H-H†)] x when the correction is on.
  void apply_vec(std::span<const cplx> x, std::span<cplx> out) const;

  kernels::CsrView csr() const;

 private:
  friend Liouvillian build(const QOperator& h, const std::vector<DissipatorSpec>& dissipators,
                           bool include_trace_correction);
  Liouvillian(Dims dims, SparseMat linear, QOperator generator, bool correction);

  Dims dims_;
  SparseMat linear_;
  QOperator generator_;
  bool correction_;
  // (vec index, weight) pairs with Tr[ρ G] = Σ weight · vec(ρ)[index]
  std::vector<std::pair<int, cplx>> generator_weights_;
};

Liouvillian build(const QOperator& h, const std::vector<DissipatorSpec>& dissipators,
                  bool include_trace_correction);

/// dρ/dt as a matrix.
DenseMat apply(const Liouvillian& l, const DensityMatrix& rho);

/// Column stacking and its inverse.
Eigen::VectorXcd vec(const DenseMat& m);
DenseMat unvec(std::span<const cplx> v, Eigen::Index side);

}  // namespace nonrecip
