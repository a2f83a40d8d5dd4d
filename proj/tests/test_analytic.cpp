#include <cmath>
#include <random>

#include "doctest.h"
#include "nonrecip/analytic.hpp"
#include "nonrecip/error.hpp"

using namespace nonrecip;

namespace {

SystemParams cooling(double g, double kg) {
  SystemParams p;
  p.g = g;
  p.g2 = 0.1;
  p.g1 = g1_from_kg(kg, p.g2);
  p.kappa_a = p.kappa_b = 1e-4;
  p.nbar_a = p.nbar_b = 20.0;
  return p;
}

MeanFieldInputs inputs(const SystemParams& p) { return mean_field_inputs(p, effective_bath(p)); }

double rhs_norm(const MeanFieldInputs& in, double na, double nb) {
  const auto d = mean_field_rhs({na, nb}, in);
  return std::max(std::abs(d.dn_a), std::abs(d.dn_b));
}

}  // namespace

TEST_CASE("sideband rates") {
  SystemParams p;
  CHECK(sideband_rates(p).a_minus == 0.0);
  CHECK(sideband_rates(p).a_plus == 0.0);

  p.g = 0.05;
  const SidebandRates r = sideband_rates(p);
  CHECK(r.a_minus == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(r.a_plus == doctest::Approx(0.0025 / 4.25).epsilon(1e-14));
  CHECK(r.a_plus == doctest::Approx(5.8824e-4).epsilon(1e-4));

  p.delta = -1.0;
  const SidebandRates blue = sideband_rates(p);
  CHECK(blue.a_plus == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(blue.a_minus == doctest::Approx(0.0025 / 4.25).epsilon(1e-14));

  p.delta = 1.0;
  const SidebandRates wide = sideband_rates(p, CavityLinewidthMap::twice);
  CHECK(wide.a_minus == doctest::Approx(0.0025 * 2.0 / 1.0));

  p.gamma = 0.0;
  CHECK_THROWS_AS(sideband_rates(p), Error);
}

TEST_CASE("effective bath") {
  SystemParams p;
  p.g = 0.05;
  p.kappa_a = 1e-4;
  p.nbar_a = 20.0;
  const EffectiveBath e = effective_bath(p);
  CHECK(std::abs(e.gamma_opt - 9.4118e-3) < 1e-6);
  CHECK(std::abs(e.n_opt - 0.0625) < 1e-12);
  CHECK(std::abs(e.kappa_a_eff - 9.5118e-3) < 1e-6);
  CHECK(std::abs(e.nbar_a_eff - 0.2721) < 1e-4);
  CHECK(e.kappa_a_eff == p.kappa_a + e.gamma_opt);
  CHECK(std::abs(e.nbar_a_eff * e.kappa_a_eff - (p.kappa_a * p.nbar_a + e.gamma_opt * e.n_opt)) < 1e-16);

  SystemParams off = p;
  off.g = 0.0;
  const EffectiveBath o = effective_bath(off);
  CHECK(o.kappa_a_eff == off.kappa_a);
  CHECK(o.nbar_a_eff == off.nbar_a);

  SystemParams cold = p;
  cold.nbar_a = 0.0;
  const EffectiveBath c = effective_bath(cold);
  CHECK(c.nbar_a_eff == doctest::Approx(c.gamma_opt * c.n_opt / c.kappa_a_eff));
  CHECK(c.nbar_a_eff < c.n_opt);

  SystemParams resonant = p;
  resonant.omega_a = 0.0;  // A- == A+
  CHECK_THROWS_AS(effective_bath(resonant), Error);
  SystemParams blue = p;
  blue.delta = -1.0;
  try {
    (void)effective_bath(blue);
    FAIL("expected anti_damping");
  } catch (const Error& err) {
    CHECK(err.code() == "anti_damping");
  }
}

TEST_CASE("rate equations in limiting cases") {
  SystemParams p;
  p.g = 0.05;
  p.kappa_a = 1e-3;
  p.kappa_b = 2e-3;
  p.nbar_a = 3.0;
  p.nbar_b = 5.0;
  const MeanFieldInputs in = inputs(p);
  const auto d = mean_field_rhs({1.0, 2.0}, in);
  CHECK(d.dn_a == doctest::Approx(in.eff.kappa_a_eff * (in.eff.nbar_a_eff - 1.0)));
  CHECK(d.dn_b == doctest::Approx(2e-3 * (5.0 - 2.0)));
  const auto d2 = mean_field_rhs({1.0, 2.0}, in, ThermalConvention::lindblad_2k);
  CHECK(d2.dn_b == doctest::Approx(2.0 * 2e-3 * (5.0 - 2.0)));
  CHECK(rhs_norm(in, in.eff.nbar_a_eff, 5.0) == 0.0);

  const RootSet b = steady_quadratic_b(in);
  CHECK(b.degenerate);
  CHECK(b.value() == doctest::Approx(5.0).epsilon(1e-14));
  const RootSet a = steady_quadratic_a(in);
  CHECK(a.degenerate);
  CHECK(a.value() == doctest::Approx(in.eff.nbar_a_eff).epsilon(1e-14));

  const auto traj = mean_field_integrate({in.eff.nbar_a_eff, 5.0}, in, 100.0);
  CHECK(traj.back().state.n_a == doctest::Approx(in.eff.nbar_a_eff).epsilon(1e-14));
  CHECK(traj.back().state.n_b == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("quadratic coefficients") {
  const MeanFieldInputs in = inputs(cooling(0.05, 2.0));
  const QuadraticCoeffs q = quadratic_coeffs(in);
  const double ka = in.eff.kappa_a_eff, kb = in.kappa_b, s = ka + kb;
  CHECK(q.A * ka * s == doctest::Approx(8.0 * in.g1 * in.g2 * kb).epsilon(1e-13));
  CHECK(q.D * kb * s == doctest::Approx(-8.0 * in.g1 * in.g2 * ka).epsilon(1e-13));
  CHECK(q.A > 0.0);
  CHECK(q.C > 0.0);
  CHECK(q.D < 0.0);
  CHECK(q.F > 0.0);

  MeanFieldInputs nokb = in;
  nokb.kappa_b = 0.0;
  CHECK(std::isnan(quadratic_coeffs(nokb).D));
}

TEST_CASE("roots are fixed points of the rate equations") {
  const MeanFieldInputs in = inputs(cooling(0.05, 2.0));
  CHECK(std::abs(in.g1 - 0.3) < 1e-12);
  const RootSet b = steady_quadratic_b(in);
  const RootSet a = steady_quadratic_a(in);
  CHECK(b.roots.size() == 2);
  CHECK(rhs_norm(in, b.partner(), b.value()) < 1e-10);
  CHECK(rhs_norm(in, a.value(), a.partner()) < 1e-10);
  CHECK(rhs_norm(in, a.value(), b.value()) < 1e-10);
  CHECK(std::abs(a.value() - b.partner()) < 1e-9);

  SUBCASE("rk4 from (20, 20)") {
    // the transfer rates make this stiff; RK4 needs a small step
    MeanFieldOptions opt;
    opt.dt = 2e-3;
    opt.stop_rhs_below = 1e-12;
    const auto traj = mean_field_integrate({20.0, 20.0}, in, 4e5, opt);
    CHECK(std::abs(traj.back().state.n_a - a.value()) < 1e-6);
    CHECK(std::abs(traj.back().state.n_b - b.value()) < 1e-6);
  }
  SUBCASE("rosenbrock from (20, 20)") {
    MeanFieldOptions opt;
    opt.method = MeanFieldMethod::rosenbrock;
    opt.dt = 1.0;
    opt.stop_rhs_below = 1e-14;
    const auto traj = mean_field_integrate({20.0, 20.0}, in, 4e5, opt);
    CHECK(std::abs(traj.back().state.n_a - a.value()) < 1e-6);
    CHECK(std::abs(traj.back().state.n_b - b.value()) < 1e-6);
  }
}

TEST_CASE("50 random parameter sets") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto logu = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(rng)); };
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    SystemParams p;
    p.g = logu(0.01, 0.1);
    p.gamma = logu(0.5, 2.0);
    p.delta = 1.0 + 0.3 * (u(rng) - 0.5);
    p.kappa_a = logu(1e-3, 1e-1);
    p.kappa_b = logu(1e-3, 1e-1);
    p.nbar_a = 20.0 * u(rng);
    p.nbar_b = 20.0 * u(rng);
    p.g2 = logu(1e-3, 5e-2);
    p.g1 = g1_from_kg(logu(1.2, 10.0), p.g2);
    CAPTURE(trial);
    const MeanFieldInputs in = inputs(p);
    const AnalyticSteadyState st = analytic_steady_state(in);
    CHECK(st.n_a >= 0.0);
    CHECK(st.n_b >= 0.0);
    CHECK(rhs_norm(in, st.n_a, st.n_b) < 1e-10);

    MeanFieldOptions opt;
    opt.method = MeanFieldMethod::rosenbrock;
    opt.dt = 1e-3;
    opt.stop_rhs_below = 1e-14;
    const double slow = std::min(in.eff.kappa_a_eff, in.kappa_b);
    const auto traj = mean_field_integrate({in.eff.nbar_a_eff, in.nbar_b}, in, 60.0 / slow, opt);
    const auto end = traj.back().state;
    CHECK(std::abs(end.n_a - st.n_a) < 1e-6 * (1.0 + st.n_a));
    CHECK(std::abs(end.n_b - st.n_b) < 1e-6 * (1.0 + st.n_b));
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("n_b decreases with K_g at both coupling strengths") {
  for (double g : {0.05, 0.01}) {
    double prev = INFINITY;
    for (double kg = 1.2; kg <= 10.0 + 1e-9; kg += 0.1) {
      const double nb = steady_quadratic_b(inputs(cooling(g, kg))).value();
      CHECK(nb <= prev);
      prev = nb;
    }
  }
}

TEST_CASE("stronger cavity coupling cools A further") {
  const double weak = analytic_steady_state(inputs(cooling(0.01, 10.0))).n_a;
  const double strong = analytic_steady_state(inputs(cooling(0.05, 10.0))).n_a;
  CHECK(weak > 5.0 * strong);
}

TEST_CASE("rate equations approach n_a = n_b near reciprocity") {
  const MeanFieldInputs in = inputs(cooling(0.05, 1.01));
  MeanFieldOptions opt;
  opt.method = MeanFieldMethod::rosenbrock;
  opt.dt = 1e-3;
  const auto end = mean_field_integrate({20.0, 20.0}, in, 1e6, opt).back().state;
  const AnalyticSteadyState st = analytic_steady_state(in);
  CHECK(std::abs(end.n_a - st.n_a) < 1e-6);
  CHECK(std::abs(end.n_a - end.n_b) < 0.05 * end.n_b);
}

TEST_CASE("divergent rate equations raise an instability error") {
  MeanFieldInputs in;
  in.g1 = 0.0;
  in.g2 = 0.0;
  in.eff.kappa_a_eff = -1.0;  // unphysical gain
  in.kappa_b = 2.0;
  MeanFieldOptions opt;
  opt.dt = 0.01;
  try {
    (void)mean_field_integrate({1.0, 1.0}, in, 100.0, opt);
    FAIL("expected mean_field_instability");
  } catch (const Error& e) {
    CHECK(e.code() == "mean_field_instability");
  }
  CHECK_THROWS_AS(quadratic_coeffs(in), Error);
}
