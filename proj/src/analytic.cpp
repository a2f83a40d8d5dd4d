#include "nonrecip/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "nonrecip/error.hpp"

namespace nonrecip {

namespace {

constexpr double kDivergence = 1e12;

double sq(double x) { return x * x; }

// Roots of a x² + b x + c with the cancellation-free formulation.
struct RawRoots {
  std::array<double, 2> re{};
  std::array<double, 2> im{};
  int count = 0;
};

RawRoots solve_quadratic(double a, double b, double c) {
  RawRoots r;
  const double disc = b * b - 4.0 * a * c;
  if (disc >= 0.0) {
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    r.re = {q / a, q != 0.0 ? c / q : 0.0};
    r.count = 2;
    // one Newton step on each root tightens the tiny root at large dynamic range
    for (double& x : r.re) {
      const double d = 2.0 * a * x + b;
      if (d != 0.0) x -= (a * x * x + b * x + c) / d;
    }
  } else {
    const double re = -b / (2.0 * a);
    const double im = std::sqrt(-disc) / (2.0 * std::abs(a));
    r.re = {re, re};
    r.im = {im, -im};
    r.count = 2;
  }
  return r;
}

std::size_t pick_by_dynamics(const RootSet& set, const MeanFieldInputs& in, bool particle_b) {
  std::vector<std::size_t> phys;
  for (std::size_t i = 0; i < set.roots.size(); ++i)
    if (set.roots[i].physical) phys.push_back(i);
  if (phys.empty())
    fail_solver("no_physical_steady_state",
                std::string("no physical root for particle ") + (particle_b ? "B" : "A"));
  if (phys.size() == 1) return phys.front();

  const double slow = std::min(in.eff.kappa_a_eff, in.kappa_b > 0 ? in.kappa_b : in.eff.kappa_a_eff);
  MeanFieldOptions opt;
  opt.method = MeanFieldMethod::rosenbrock;
  opt.dt = 1e-3 / std::max(slow, 1e-12);
  opt.stop_rhs_below = 1e-13;
  auto traj = mean_field_integrate({in.eff.nbar_a_eff, in.nbar_b}, in, 200.0 / slow, opt);
  const MeanFieldState end = traj.back().state;
  const double target = particle_b ? end.n_b : end.n_a;
  return *std::min_element(phys.begin(), phys.end(), [&](std::size_t x, std::size_t y) {
    return std::abs(set.roots[x].value - target) < std::abs(set.roots[y].value - target);
  });
}

void require_dissipative(const MeanFieldInputs& in) {
  if (!(in.denom() > 0.0))
    fail_solver("singular_denominator", "kappa_a_eff + kappa_b must be > 0");
  if (!(in.eff.kappa_a_eff > 0.0))
    fail_solver("anti_damping", "effective damping of particle A must be > 0");
}

}  // namespace

ThermalConvention parse_thermal_convention(std::string_view s) {
  if (s == "single_rate") return ThermalConvention::single_rate;
  if (s == "lindblad_2k") return ThermalConvention::lindblad_2k;
  fail_config("invalid_convention", "unknown thermal_rate_convention '" + std::string(s) + "'");
}

CavityLinewidthMap parse_linewidth_map(std::string_view s) {
  if (s == "identity") return CavityLinewidthMap::identity;
  if (s == "double") return CavityLinewidthMap::twice;
  fail_config("invalid_convention", "unknown cavity_linewidth_map '" + std::string(s) + "'");
}

std::string_view to_string(ThermalConvention c) {
  return c == ThermalConvention::single_rate ? "single_rate" : "lindblad_2k";
}

std::string_view to_string(CavityLinewidthMap m) {
  return m == CavityLinewidthMap::identity ? "identity" : "double";
}

SidebandRates sideband_rates(const SystemParams& p, CavityLinewidthMap map) {
  if (!(p.gamma > 0.0)) fail_solver("zero_linewidth", "sideband rates need gamma > 0");
  const double lw = map == CavityLinewidthMap::twice ? 2.0 * p.gamma : p.gamma;
  const double half = sq(lw / 2.0);
  return {p.g * p.g * lw / (sq(p.delta - p.omega_a) + half),
          p.g * p.g * lw / (sq(p.delta + p.omega_a) + half)};
}

EffectiveBath effective_bath(const SystemParams& p, const SidebandRates& r) {
  EffectiveBath eff;
  if (r.a_minus == 0.0 && r.a_plus == 0.0) {
    eff.kappa_a_eff = p.kappa_a;
    eff.nbar_a_eff = p.nbar_a;
    return eff;
  }
  eff.gamma_opt = r.a_minus - r.a_plus;
  if (eff.gamma_opt == 0.0)
    fail_solver("resonant_degenerate", "anti-Stokes and Stokes rates are equal; n_opt undefined");
  if (eff.gamma_opt < 0.0)
    fail_solver("anti_damping", "net optical anti-damping (blue detuning) is not supported");
  eff.n_opt = r.a_plus / eff.gamma_opt;
  eff.kappa_a_eff = p.kappa_a + eff.gamma_opt;
  if (!(eff.kappa_a_eff > 0.0))
    fail_solver("anti_damping", "effective damping of particle A must be > 0");
  eff.nbar_a_eff = (p.kappa_a * p.nbar_a + eff.gamma_opt * eff.n_opt) / eff.kappa_a_eff;
  return eff;
}

EffectiveBath effective_bath(const SystemParams& p, CavityLinewidthMap map) {
  return effective_bath(p, sideband_rates(p, map));
}

double MeanFieldInputs::rate_up() const noexcept { return 2.0 * sq(g1 + g2) / denom(); }
double MeanFieldInputs::rate_down() const noexcept { return 2.0 * sq(g1 - g2) / denom(); }

MeanFieldInputs mean_field_inputs(const SystemParams& p, const EffectiveBath& eff) {
  return {p.g1, p.g2, eff, p.kappa_b, p.nbar_b};
}

MeanFieldDerivative mean_field_rhs(const MeanFieldState& s, const MeanFieldInputs& in,
                                   ThermalConvention conv) {
  if (!(in.denom() > 0.0))
    fail_solver("singular_denominator", "kappa_a_eff + kappa_b must be > 0");
  const double c = conv == ThermalConvention::lindblad_2k ? 2.0 : 1.0;
  const double transfer = in.rate_up() * (1.0 + s.n_a) * s.n_b - in.rate_down() * s.n_a * (1.0 + s.n_b);
  return {transfer + c * in.eff.kappa_a_eff * (in.eff.nbar_a_eff - s.n_a),
          -transfer + c * in.kappa_b * (in.nbar_b - s.n_b)};
}

QuadraticCoeffs quadratic_coeffs(const MeanFieldInputs& in) {
  require_dissipative(in);
  const double ka = in.eff.kappa_a_eff, kb = in.kappa_b, na = in.eff.nbar_a_eff, nb = in.nbar_b;
  const double s = ka + kb;
  const double cross = 8.0 * in.g1 * in.g2 / s;
  const double up = 2.0 * sq(in.g1 + in.g2) / s;
  const double down = 2.0 * sq(in.g1 - in.g2) / s;

  QuadraticCoeffs q;
  q.A = cross * kb / ka;
  q.B = -cross * (na + kb / ka * nb) - up - down * kb / ka - kb;
  q.C = down * (na + kb / ka * nb) + kb * nb;
  if (kb > 0.0) {
    q.D = -cross * ka / kb;
    q.E = cross * (ka / kb * na + nb) - up * ka / kb - down - ka;
    q.F = up * (ka / kb * na + nb) + ka * na;
  } else {
    q.D = q.E = q.F = std::numeric_limits<double>::quiet_NaN();
  }
  return q;
}

RootSet steady_quadratic_b(const MeanFieldInputs& in) {
  const QuadraticCoeffs q = quadratic_coeffs(in);
  const double ka = in.eff.kappa_a_eff, kb = in.kappa_b;
  // Summing both stationary equations gives n_a linearly in n_b.
  auto partner = [&](double nb) { return in.eff.nbar_a_eff + kb / ka * (in.nbar_b - nb); };

  RootSet set;
  if (q.A == 0.0) {
    set.degenerate = true;
    if (q.B == 0.0) fail_solver("degenerate_quadratic", "both A and B vanish for particle B");
    const double x = -q.C / q.B;
    set.roots.push_back({x, 0.0, partner(x), true, false});
  } else {
    const RawRoots r = solve_quadratic(q.A, q.B, q.C);
    for (int i = 0; i < r.count; ++i)
      set.roots.push_back({r.re[i], r.im[i], partner(r.re[i]), r.im[i] == 0.0, false});
  }
  for (auto& root : set.roots)
    root.physical = root.real && root.value >= 0.0 && root.partner >= 0.0;
  set.selected = pick_by_dynamics(set, in, true);
  return set;
}

RootSet steady_quadratic_a(const MeanFieldInputs& in) {
  require_dissipative(in);
  const double ka = in.eff.kappa_a_eff, kb = in.kappa_b;
  RootSet set;
  if (!(kb > 0.0)) {
    // κ_b = 0: particle A relaxes to its effective bath; B follows from dn_a/dt = 0.
    set.degenerate = true;
    const double na = in.eff.nbar_a_eff;
    const double den = in.rate_up() * (1.0 + na) - in.rate_down() * na;
    const double nb = den != 0.0 ? in.rate_down() * na / den : std::numeric_limits<double>::quiet_NaN();
    set.roots.push_back({na, 0.0, nb, true, na >= 0.0 && nb >= 0.0});
    set.selected = pick_by_dynamics(set, in, false);
    return set;
  }
  const QuadraticCoeffs q = quadratic_coeffs(in);
  auto partner = [&](double na) { return in.nbar_b + ka / kb * (in.eff.nbar_a_eff - na); };
  if (q.D == 0.0) {
    set.degenerate = true;
    if (q.E == 0.0) fail_solver("degenerate_quadratic", "both D and E vanish for particle A");
    const double x = -q.F / q.E;
    set.roots.push_back({x, 0.0, partner(x), true, false});
  } else {
    const RawRoots r = solve_quadratic(q.D, q.E, q.F);
    for (int i = 0; i < r.count; ++i)
      set.roots.push_back({r.re[i], r.im[i], partner(r.re[i]), r.im[i] == 0.0, false});
  }
  for (auto& root : set.roots)
    root.physical = root.real && root.value >= 0.0 && root.partner >= 0.0;
  set.selected = pick_by_dynamics(set, in, false);
  return set;
}

namespace {

struct Vec2 {
  double a, b;
};

Vec2 rhs2(const Vec2& y, const MeanFieldInputs& in, ThermalConvention conv) {
  auto d = mean_field_rhs({y.a, y.b}, in, conv);
  return {d.dn_a, d.dn_b};
}

// Jacobian of the rate equations, row-major [[faa, fab], [fba, fbb]].
std::array<double, 4> jacobian(const Vec2& y, const MeanFieldInputs& in, ThermalConvention conv) {
  const double c = conv == ThermalConvention::lindblad_2k ? 2.0 : 1.0;
  const double up = in.rate_up(), down = in.rate_down();
  const double dta = up * y.b - down * (1.0 + y.b);  // d(transfer)/dn_a
  const double dtb = up * (1.0 + y.a) - down * y.a;  // d(transfer)/dn_b
  return {dta - c * in.eff.kappa_a_eff, dtb, -dta, -dtb - c * in.kappa_b};
}

Vec2 solve2(const std::array<double, 4>& m, const Vec2& r) {
  const double det = m[0] * m[3] - m[1] * m[2];
  if (det == 0.0) fail_solver("mean_field_instability", "singular Rosenbrock matrix");
  return {(m[3] * r.a - m[1] * r.b) / det, (m[0] * r.b - m[2] * r.a) / det};
}

void check_finite(const Vec2& y, double t) {
  if (!(std::abs(y.a) < kDivergence) || !(std::abs(y.b) < kDivergence))
    fail_solver("mean_field_instability",
                "rate equations diverged at t=" + std::to_string(t));
}

}  // namespace

std::vector<MeanFieldSample> mean_field_integrate(const MeanFieldState& initial,
                                                  const MeanFieldInputs& in, double t_final,
                                                  const MeanFieldOptions& opt) {
  if (!(initial.n_a >= 0.0) || !(initial.n_b >= 0.0))
    fail_usage("invalid_state", "initial mean-field occupations must be >= 0");
  if (!(t_final > 0.0) || !(opt.dt > 0.0))
    fail_usage("invalid_argument", "t_final and dt must be > 0");
  const ThermalConvention conv = opt.convention;

  std::vector<MeanFieldSample> out;
  Vec2 y{initial.n_a, initial.n_b};
  double t = 0.0;
  out.push_back({t, {y.a, y.b}});
  std::size_t step = 0;
  auto converged = [&](const Vec2& f) {
    return opt.stop_rhs_below > 0.0 && std::max(std::abs(f.a), std::abs(f.b)) < opt.stop_rhs_below;
  };

  if (opt.method == MeanFieldMethod::rk4) {
    const auto n = static_cast<std::size_t>(std::ceil(t_final / opt.dt - 1e-9));
    const double h = t_final / static_cast<double>(n);
    for (step = 1; step <= n; ++step) {
      const Vec2 k1 = rhs2(y, in, conv);
      if (converged(k1)) break;
      const Vec2 k2 = rhs2({y.a + 0.5 * h * k1.a, y.b + 0.5 * h * k1.b}, in, conv);
      const Vec2 k3 = rhs2({y.a + 0.5 * h * k2.a, y.b + 0.5 * h * k2.b}, in, conv);
      const Vec2 k4 = rhs2({y.a + h * k3.a, y.b + h * k3.b}, in, conv);
      y.a += h / 6.0 * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a);
      y.b += h / 6.0 * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b);
      t = static_cast<double>(step) * h;
      check_finite(y, t);
      if (opt.record_every && step % opt.record_every == 0) out.push_back({t, {y.a, y.b}});
    }
  } else {
    // ROS2: L-stable two-stage Rosenbrock with an embedded first-order estimate.
    const double gam = 1.0 + 1.0 / std::sqrt(2.0);
    double h = std::min(opt.dt, t_final);
    while (t < t_final) {
      h = std::min(h, t_final - t);
      const Vec2 f0 = rhs2(y, in, conv);
      if (converged(f0)) break;
      const auto j = jacobian(y, in, conv);
      const std::array<double, 4> w{1.0 - gam * h * j[0], -gam * h * j[1], -gam * h * j[2],
                                    1.0 - gam * h * j[3]};
      const Vec2 k1 = solve2(w, f0);
      const Vec2 f1 = rhs2({y.a + h * k1.a, y.b + h * k1.b}, in, conv);
      const Vec2 k2 = solve2(w, {f1.a - 2.0 * k1.a, f1.b - 2.0 * k1.b});
      const Vec2 next{y.a + h * (1.5 * k1.a + 0.5 * k2.a), y.b + h * (1.5 * k1.b + 0.5 * k2.b)};
      const double ea = 0.5 * h * std::abs(k1.a + k2.a) / (opt.abs_tol + opt.rel_tol * std::abs(next.a));
      const double eb = 0.5 * h * std::abs(k1.b + k2.b) / (opt.abs_tol + opt.rel_tol * std::abs(next.b));
      const double err = std::max(ea, eb);
      if (err <= 1.0 || h < 1e-14 * std::max(1.0, t)) {
        y = next;
        t += h;
        ++step;
        check_finite(y, t);
        if (opt.record_every && step % opt.record_every == 0) out.push_back({t, {y.a, y.b}});
      }
      const double fac = err > 0.0 ? 0.9 / std::sqrt(err) : 5.0;
      h *= std::clamp(fac, 0.2, 5.0);
    }
  }
  if (out.back().t != t || out.size() == 1) out.push_back({t, {y.a, y.b}});
  return out;
}

AnalyticSteadyState analytic_steady_state(const MeanFieldInputs& in) {
  const RootSet b = steady_quadratic_b(in);
  const RootSet a = steady_quadratic_a(in);
  return {a.value(), b.value()};
}

}  // namespace nonrecip
