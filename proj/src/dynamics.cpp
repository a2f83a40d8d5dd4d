#include "nonrecip/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nonrecip/error.hpp"
#include "nonrecip/kernels.hpp"

namespace nonrecip {

namespace {

using Buffer = std::vector<cplx>;

double trace_of(std::span<const cplx> x, Eigen::Index side) {
  double tr = 0.0;
  for (Eigen::Index i = 0; i < side; ++i) tr += x[static_cast<std::size_t>(i * side + i)].real();
  return tr;
}


// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Integrator parse_integrator(std::string_view s) {
  if (s == "rk4") return Integrator::rk4;
  if (s == "rk45") return Integrator::rk45;
  fail_config("invalid_method", "unknown integrator '" + std::string(s) + "'");
}

std::string_view to_string(Integrator m) { return m == Integrator::rk4 ? "rk4" : "rk45"; }

void EvolutionConfig::validate() const {
  if (!(t_final > 0.0)) fail_config("invalid_evolution", "t_final must be > 0");
  if (!(dt > 0.0) || !(dt < t_final)) fail_config("invalid_evolution", "need 0 < dt < t_final");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    fail_config("invalid_evolution", "tolerances must be > 0");
  if (record_every < 1) fail_config("invalid_evolution", "record_every must be >= 1");
  if (!(steady_eps > 0.0)) fail_config("invalid_evolution", "steady_eps must be > 0");
}

Diagnostics diagnostics(const DensityMatrix& rho) {
  Diagnostics d;
  const DenseMat& m = rho.data();
  d.trace = m.trace().real();
  d.min_diag = m.diagonal().real().minCoeff();
  const DenseMat herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMat> es(herm, Eigen::EigenvaluesOnly);
  d.min_eig_herm = es.eigenvalues().minCoeff();
  return d;
}

TrajectoryRecord make_record(double t, const DensityMatrix& rho) {
  const std::vector<double> occ = mode_occupations(rho);
  const Diagnostics d = diagnostics(rho);
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  return {t,
          occ.size() > 0 ? occ[0] : nan,
          occ.size() > 1 ? occ[1] : nan,
          occ.size() > 2 ? occ[2] : nan,
          d.trace,
          d.min_diag,
          d.min_eig_herm};
}

EvolutionResult evolve(const Liouvillian& l, const DensityMatrix& rho0, const EvolutionConfig& cfg) {
  cfg.validate();
  require_same_dims(l.dims(), rho0.dims(), "evolve");
  if (std::abs(rho0.trace() - 1.0) > 1e-10 || rho0.hermiticity_defect() > 1e-10)
    fail_usage("invalid_state", "initial state must have unit trace and be Hermitian");

  const Eigen::Index side = rho0.side();
  const auto n = static_cast<std::size_t>(side * side);
  const auto& k = kernels::active();

  const Eigen::VectorXcd v0 = vec(rho0.data());
  Buffer x(v0.data(), v0.data() + v0.size());
  Buffer k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n);

  EvolutionResult res{{}, rho0, 0.0, false, 0, 0};
  auto to_rho = [&](const Buffer& b) {
    return DensityMatrix(l.dims(), unvec(b, side));
  };
  auto record = [&](double t) { res.records.push_back(make_record(t, to_rho(x))); };
  auto check_trace = [&](double t) {
    const double tr = trace_of(x, side);
    if (!std::isfinite(tr))
      fail_solver("nonfinite_state", "state became non-finite at t=" + std::to_string(t));
    if (cfg.enforce_trace && std::abs(tr - 1.0) > cfg.trace_tolerance)
      fail_solver("trace_drift", "trace " + std::to_string(tr) + " left tolerance at t=" +
                                     std::to_string(t));
  };

  record(0.0);
  double t = 0.0;
  double deriv_norm = std::numeric_limits<double>::infinity();
  bool last_recorded = true;

  if (cfg.method == Integrator::rk4) {
    const auto steps = static_cast<std::size_t>(std::ceil(cfg.t_final / cfg.dt - 1e-9));
    const double h = cfg.t_final / static_cast<double>(steps);
    for (std::size_t s = 1; s <= steps; ++s) {
      l.apply_vec(x, k1);
      deriv_norm = k.max_abs(k1.data(), n);
      if (cfg.stop_at_steady && deriv_norm < cfg.steady_eps) break;
      k.add_scaled(x.data(), 0.5 * h, k1.data(), tmp.data(), n);
      l.apply_vec(tmp, k2);
      k.add_scaled(x.data(), 0.5 * h, k2.data(), tmp.data(), n);
      l.apply_vec(tmp, k3);
      k.add_scaled(x.data(), h, k3.data(), tmp.data(), n);
      l.apply_vec(tmp, k4);
      k.axpy(h / 6.0, k1.data(), x.data(), n);
      k.axpy(h / 3.0, k2.data(), x.data(), n);
      k.axpy(h / 3.0, k3.data(), x.data(), n);
      k.axpy(h / 6.0, k4.data(), x.data(), n);
      t = static_cast<double>(s) * h;
      ++res.accepted_steps;
      check_trace(t);
      last_recorded = s % cfg.record_every == 0;
      if (last_recorded) record(t);
    }
  } else {
    double h = cfg.dt;
    double err_prev = 1e-4;
    l.apply_vec(x, k1);
    while (t < cfg.t_final) {
      deriv_norm = k.max_abs(k1.data(), n);
      if (cfg.stop_at_steady && deriv_norm < cfg.steady_eps) break;
      h = std::min(h, cfg.t_final - t);
      if (h < cfg.min_step)
        fail_solver("step_underflow", "rk45 step fell below " + std::to_string(cfg.min_step) +
                                          " at t=" + std::to_string(t));
      auto stage = [&](Buffer& out, std::initializer_list<std::pair<double, const Buffer*>> terms) {
        std::copy(x.begin(), x.end(), tmp.begin());
        for (const auto& [c, b] : terms) k.axpy(h * c, b->data(), tmp.data(), n);
        l.apply_vec(tmp, out);
      };
      stage(k2, {{a21, &k1}});
      stage(k3, {{a31, &k1}, {a32, &k2}});
      stage(k4, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
      stage(k5, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
      stage(k6, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
      // 5th-order solution into tmp, FSAL stage into k7
      std::copy(x.begin(), x.end(), tmp.begin());
      k.axpy(h * b1, k1.data(), tmp.data(), n);
      k.axpy(h * b3, k3.data(), tmp.data(), n);
      k.axpy(h * b4, k4.data(), tmp.data(), n);
      k.axpy(h * b5, k5.data(), tmp.data(), n);
      k.axpy(h * b6, k6.data(), tmp.data(), n);
      l.apply_vec(tmp, k7);

      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
        const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(x[i]), std::abs(tmp[i]));
        err = std::max(err, std::abs(e) / scale);
      }
      if (!std::isfinite(err)) err = 1e10;

      if (err <= 1.0) {
        t += h;
        x.swap(tmp);
        k1.swap(k7);
        ++res.accepted_steps;
        check_trace(t);
        last_recorded = res.accepted_steps % cfg.record_every == 0;
        if (last_recorded) record(t);
        // PI controller
        const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
                           std::pow(err_prev, 0.4 / 5.0);
        h *= std::clamp(fac, 0.2, 5.0);
        err_prev = std::max(err, 1e-4);
      } else {
        ++res.rejected_steps;
        h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      }
    }
  }

  l.apply_vec(x, k1);
  deriv_norm = k.max_abs(k1.data(), n);
  if (!last_recorded || res.records.back().t != t) record(t);
  res.final_state = to_rho(x);
  res.final_derivative_norm = deriv_norm;
  res.steady = deriv_norm < cfg.steady_eps;
  return res;
}

}  // namespace nonrecip
