#include "nonrecip/liouvillian.hpp"

#include "nonrecip/error.hpp"

namespace nonrecip {

Liouvillian::Liouvillian(Dims dims, SparseMat linear, QOperator generator, bool correction)
    : dims_(std::move(dims)),
      linear_(std::move(linear)),
      generator_(std::move(generator)),
      correction_(correction) {
  linear_.makeCompressed();
  const SparseMat& g = generator_.data();
  const auto d = static_cast<int>(g.rows());
  // Tr[ρ G] = Σ_{r,c} G(r,c) ρ(c,r), and ρ(c,r) sits at c + r·D.
  for (int r = 0; r < g.outerSize(); ++r)
    for (SparseMat::InnerIterator it(g, r); it; ++it)
      if (it.value() != cplx{0.0, 0.0})
        generator_weights_.emplace_back(static_cast<int>(it.col()) + r * d, it.value());
}

cplx Liouvillian::generator_expectation(std::span<const cplx> vec_rho) const {
  cplx acc{0.0, 0.0};
  for (const auto& [idx, w] : generator_weights_) acc += w * vec_rho[idx];
  return acc;
}

kernels::CsrView Liouvillian::csr() const {
  const auto rows = static_cast<std::size_t>(linear_.rows());
  const auto nnz = static_cast<std::size_t>(linear_.nonZeros());
  return {rows,
          {linear_.outerIndexPtr(), rows + 1},
          {linear_.innerIndexPtr(), nnz},
          {linear_.valuePtr(), nnz}};
}

void Liouvillian::apply_vec(std::span<const cplx> x, std::span<cplx> out) const {
  const auto n = static_cast<std::size_t>(linear_.rows());
  if (x.size() != n || out.size() != n)
    fail_usage("dimension_mismatch", "Liouvillian apply: vector length mismatch");
  kernels::spmv(csr(), x, out);
  if (correction_ && !generator_weights_.empty()) {
    const cplx scale = cplx{0.0, 1.0} * generator_expectation(x);
    kernels::axpy(scale, x, out);
  }
}

Liouvillian build(const QOperator& h, const std::vector<DissipatorSpec>& dissipators,
                  bool include_trace_correction) {
  const Dims& dims = h.dims();
  const Eigen::Index d = h.side();
  SparseMat id(d, d);
  id.setIdentity();
  const cplx minus_i{0.0, -1.0};

  // -i(Hρ - ρH†)  ->  -i (I ⊗ H) + i (conj(H) ⊗ I)
  SparseMat l = kron(id, h.data()) * minus_i - kron(SparseMat(h.data().conjugate()), id) * minus_i;

  for (const auto& spec : dissipators) {
    require_same_dims(dims, spec.jump.dims(), "Liouvillian build");
    if (spec.rate < 0.0) fail_usage("invalid_parameter", "dissipator rate must be >= 0");
    if (spec.rate == 0.0) continue;
    const SparseMat& j = spec.jump.data();
    const SparseMat jdj = j.adjoint() * j;
    // 2 JρJ† - J†Jρ - ρJ†J
    SparseMat term = kron(SparseMat(j.conjugate()), j) * 2.0 - kron(id, jdj) -
                     kron(SparseMat(jdj.transpose()), id);
    l += term * spec.rate;
  }
  l.prune(cplx{0.0, 0.0});
  return Liouvillian(dims, std::move(l), h - h.adjoint(), include_trace_correction);
}

Eigen::VectorXcd vec(const DenseMat& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

DenseMat unvec(std::span<const cplx> v, Eigen::Index side) {
  if (static_cast<Eigen::Index>(v.size()) != side * side)
    fail_usage("dimension_mismatch", "unvec: length is not side²");
  return Eigen::Map<const DenseMat>(v.data(), side, side);
}

DenseMat apply(const Liouvillian& l, const DensityMatrix& rho) {
  require_same_dims(l.dims(), rho.dims(), "Liouvillian apply");
  const Eigen::VectorXcd x = vec(rho.data());
  Eigen::VectorXcd y(x.size());
  l.apply_vec({x.data(), static_cast<std::size_t>(x.size())},
              {y.data(), static_cast<std::size_t>(y.size())});
  return unvec({y.data(), static_cast<std::size_t>(y.size())}, rho.side());
}

}  // namespace nonrecip
