#pragma once
// Stationary states of the linear (trace-correction-free) Liouvillian.
//
// The primary route replaces one row of L with the trace functional and
// solves the resulting sparse system; the dense route diagonalizes L and is
// kept as an independent oracle for small systems.

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

#include "nonrecip/liouvillian.hpp"

namespace nonrecip {

enum class RowPolicy { largest_diagonal, first };
enum class LinearSolver { automatic, direct, iterative };

RowPolicy parse_row_policy(std::string_view s);
LinearSolver parse_linear_solver(std::string_view s);

struct SteadyStateOptions {
  RowPolicy row_policy = RowPolicy::largest_diagonal;
  LinearSolver solver = LinearSolver::automatic;
  // automatic switches to the iterative solver above this many unknowns
  Eigen::Index iterative_threshold = 250000;
  // relative residual of the bordered system above which the solve is rejected
  double conditioning_threshold = 1e-8;
  int gmres_restart = 80;
  int max_iterations = 20000;
  double iterative_tolerance = 1e-13;
};

struct SteadyStateResult {
  explicit SteadyStateResult(DensityMatrix rho) : rho_ss(std::move(rho)) {}

  DensityMatrix rho_ss;
  double n_a = 0.0;
  double n_b = 0.0;
  double n_c = 0.0;
  double residual = 0.0;          // ‖L vec(ρ_ss)‖∞
  double repair_magnitude = 0.0;  // ‖ρ_raw − ρ_ss‖∞ from Hermitize + normalize
  std::string method;
  Eigen::Index replaced_row = -1;  // sparse route only
  double zero_gap = 0.0;           // dense route only: distance to the next eigenvalue
};

/// Row of L (in vec(ρ) indexing) replaced by the trace functional. Only rows
/// belonging to diagonal entries ρ(i,i) are candidates.
Eigen::Index which_row(const Liouvillian& l, RowPolicy policy);

SteadyStateResult solve_sparse(const Liouvillian& l, const SteadyStateOptions& opt = {});

/// Eigenvector of L for the eigenvalue nearest zero. Limited to D <= 64.
/// Throws degenerate_steady_state when that eigenvalue is not isolated.
SteadyStateResult solve_dense_oracle(const Liouvillian& l);

}  // namespace nonrecip
