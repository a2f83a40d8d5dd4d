#include "nonrecip/steadystate.hpp"

#include <Eigen/UmfPackSupport>
#include <unsupported/Eigen/IterativeSolvers>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "nonrecip/error.hpp"
#include "nonrecip/kernels.hpp"

namespace nonrecip {

namespace {

// 64-bit indices: the 32-bit UMFPACK interface runs out of workspace near D = 400
using ColSparse = Eigen::SparseMatrix<cplx, Eigen::ColMajor, long>;

void require_linear(const Liouvillian& l) {
  if (l.include_trace_correction())
    fail_usage("trace_correction_enabled",
               "steady-state solvers need a Liouvillian built without the trace correction");
}

double sup_norm(const Eigen::VectorXcd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// ‖M‖∞ as the maximum absolute row sum.
double row_sum_norm(const ColSparse& m) {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(m.rows());
  for (Eigen::Index c = 0; c < m.outerSize(); ++c)
    for (ColSparse::InnerIterator it(m, c); it; ++it) sums[it.row()] += std::abs(it.value());
  return sums.maxCoeff();
}

void finish(SteadyStateResult& res, const Liouvillian& l, const DenseMat& raw) {
  const DensityMatrix raw_rho(l.dims(), raw);
  res.rho_ss = raw_rho.hermitized_normalized();
  res.repair_magnitude = (raw - res.rho_ss.data()).cwiseAbs().maxCoeff();
  const Eigen::VectorXcd x = vec(res.rho_ss.data());
  Eigen::VectorXcd y(x.size());
  kernels::spmv(l.csr(), {x.data(), static_cast<std::size_t>(x.size())},
                {y.data(), static_cast<std::size_t>(y.size())});
  res.residual = sup_norm(y);
  const std::vector<double> occ = mode_occupations(res.rho_ss);
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  res.n_a = occ.size() > 0 ? occ[0] : nan;
  res.n_b = occ.size() > 1 ? occ[1] : nan;
  res.n_c = occ.size() > 2 ? occ[2] : nan;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

RowPolicy parse_row_policy(std::string_view s) {
  if (s == "largest_diagonal") return RowPolicy::largest_diagonal;
  if (s == "first") return RowPolicy::first;
  fail_config("invalid_row_policy", "unknown row policy '" + std::string(s) + "'");
}

LinearSolver parse_linear_solver(std::string_view s) {
  if (s == "automatic") return LinearSolver::automatic;
  if (s == "direct") return LinearSolver::direct;
  if (s == "iterative") return LinearSolver::iterative;
  fail_config("invalid_solver", "unknown linear solver '" + std::string(s) + "'");
}

Eigen::Index which_row(const Liouvillian& l, RowPolicy policy) {
  const Eigen::Index d = l.hilbert_dim();
  if (policy == RowPolicy::first) return 0;
  Eigen::Index best = 0;
  double best_mag = -1.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::Index k = i + i * d;
    const double mag = std::abs(l.linear_part().coeff(k, k));
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  return best_mag > 0.0 ? best : 0;
}

SteadyStateResult solve_sparse(const Liouvillian& l, const SteadyStateOptions& opt) {
  require_linear(l);
  const Eigen::Index d = l.hilbert_dim();
  const Eigen::Index n = d * d;
  const SparseMat& lin = l.linear_part();
  const Eigen::Index row = which_row(l, opt.row_policy);

  std::vector<Eigen::Triplet<cplx, long>> trips;
  trips.reserve(static_cast<std::size_t>(lin.nonZeros() + d));
  for (Eigen::Index r = 0; r < lin.outerSize(); ++r) {
    if (r == row) continue;
    for (SparseMat::InnerIterator it(lin, r); it; ++it) trips.emplace_back(r, it.col(), it.value());
  }
  for (Eigen::Index i = 0; i < d; ++i) trips.emplace_back(row, i + i * d, cplx{1.0, 0.0});
  ColSparse m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  trips.clear();
  trips.shrink_to_fit();

  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  rhs[row] = 1.0;
  Eigen::VectorXcd x;

  SteadyStateResult res(DensityMatrix::maximally_mixed(l.dims()));
  res.replaced_row = row;
  const bool direct = opt.solver == LinearSolver::direct ||
                      (opt.solver == LinearSolver::automatic && n <= opt.iterative_threshold);
  if (direct) {
    Eigen::UmfPackLU<ColSparse> lu;
    lu.compute(m);
    if (lu.info() != Eigen::Success) fail_solver("singular_system", "sparse LU factorization failed");
    x = lu.solve(rhs);
    res.method = "sparse_lu";
  } else {
    Eigen::GMRES<ColSparse, Eigen::IncompleteLUT<cplx, long>> gmres;
    gmres.set_restart(opt.gmres_restart);
    gmres.setTolerance(opt.iterative_tolerance);
    gmres.setMaxIterations(opt.max_iterations);
    gmres.preconditioner().setDroptol(1e-6);
    gmres.preconditioner().setFillfactor(20);
    gmres.compute(m);
    x = gmres.solve(rhs);
    if (gmres.info() != Eigen::Success)
      fail_solver("iterative_nonconvergence",
                  "GMRES did not converge after " + std::to_string(gmres.iterations()) +
                      " iterations, estimated error " + fmt(gmres.error()));
    res.method = "gmres_ilut";
  }

  const double bordered = sup_norm(m * x - rhs);
  const double rel = bordered / (row_sum_norm(m) * sup_norm(x) + 1.0);
  if (!std::isfinite(rel) || rel > opt.conditioning_threshold)
    fail_solver("ill_conditioned",
                "bordered system residual " + fmt(bordered) + " (relative " + fmt(rel) + ")");

  finish(res, l, unvec({x.data(), static_cast<std::size_t>(x.size())}, d));
  return res;
}

SteadyStateResult solve_dense_oracle(const Liouvillian& l) {
  require_linear(l);
  const Eigen::Index d = l.hilbert_dim();
  if (d > 64) fail_usage("oracle_too_large", "dense oracle is limited to D <= 64");

  // LAPACK rather than Eigen so the oracle shares no code with the sparse route
  DenseMat dense(l.linear_part());
  const lapack_int n = static_cast<lapack_int>(dense.rows());
  Eigen::VectorXcd evals(n);
  DenseMat vecs(n, n);
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, dense.data(), n, evals.data(),
                                        nullptr, 1, vecs.data(), n);
  if (info != 0) fail_solver("eigensolver_failed", "zgeev failed with info " + std::to_string(info));

  Eigen::Index first = -1, second = -1;
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    const double mag = std::abs(evals[i]);
    if (first < 0 || mag < std::abs(evals[first])) {
      second = first;
      first = i;
    } else if (second < 0 || mag < std::abs(evals[second])) {
      second = i;
    }
  }
  SteadyStateResult res(DensityMatrix::maximally_mixed(l.dims()));
  res.zero_gap = second >= 0 ? std::abs(evals[second] - evals[first])
                             : std::numeric_limits<double>::infinity();
  if (res.zero_gap < 1e-12)
    fail_solver("degenerate_steady_state",
                "eigenvalue nearest zero is not isolated (gap " + fmt(res.zero_gap) + ")");

  const Eigen::VectorXcd v = vecs.col(first);
  DenseMat raw = unvec({v.data(), static_cast<std::size_t>(v.size())}, d);
  const cplx tr = raw.trace();
  if (std::abs(tr) < 1e-300) fail_solver("zero_trace", "null vector has zero trace");
  raw /= tr;
  res.method = "dense_eig";
  finish(res, l, raw);
  return res;
}

}  // namespace nonrecip
