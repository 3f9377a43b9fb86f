#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ow/errors.hpp"
#include "ow/param_flows.hpp"
#include "ow/trial_family.hpp"

using namespace ow;

namespace {

ParameterState state1(double u, double v) {
  ParameterState s;
  s.u = {u};
  s.v = {v};
  return s;
}

}  // namespace

TEST_CASE("coherent family parameter fluxes") {
  const auto fam = make_coherent_family(0.5, Potential::harmonic(1.0));
  const auto s = state1(0.7, 1.3);
  CHECK(fam->flux_u(s)[0] == doctest::Approx(1.3).epsilon(1e-14));  // j_q0 = p0
  CHECK(fam->flux_v(s)[0] == 0.0);                                  // j_p0 = 0
  // quadrature oracle agrees
  CHECK(fam->flux_u_quadrature(s)[0] == doctest::Approx(1.3).epsilon(1e-6));
  CHECK(std::abs(fam->flux_v_quadrature(s)[0]) < 1e-6);
}

TEST_CASE("skewed family has a nonzero j_v") {
  const double alpha = 0.5, skew = 0.3;
  const auto fam = make_skewed_family(alpha, skew, Potential::harmonic(1.0));
  const auto s = state1(0.4, 0.9);
  const double jv = fam->flux_v(s)[0];
  CHECK(jv != 0.0);
  CHECK(fam->flux_v_quadrature(s)[0] == doctest::Approx(jv).epsilon(1e-5));
  CHECK(fam->flux_u(s)[0] == doctest::Approx(0.9).epsilon(1e-12));
  // the closed-form energy matches the quadrature oracle
  CHECK(fam->energy_quadrature(s) == doctest::Approx(fam->energy(s)).epsilon(1e-6));
}

TEST_CASE("two-Gaussian family closed forms match quadrature") {
  const auto fam = make_two_gaussian_family(0.6, 0.8, Potential::harmonic(1.0));
  ParameterState s;
  s.u = {-1.0, 1.2};
  s.v = {0.5, -0.3};
  CHECK(fam->energy_quadrature(s) == doctest::Approx(fam->energy(s)).epsilon(1e-6));
  const auto ju = fam->flux_u(s);
  const auto ju_q = fam->flux_u_quadrature(s);
  const auto jv = fam->flux_v(s);
  const auto jv_q = fam->flux_v_quadrature(s);
  for (int k = 0; k < 2; ++k) {
    CHECK(ju_q[k] == doctest::Approx(ju[k]).epsilon(1e-5));
    CHECK(jv_q[k] - jv[k] == doctest::Approx(0.0).epsilon(1e-6));
  }
}

TEST_CASE("gradient consistency against central finite differences") {
  const auto harmonic = Potential::harmonic(1.0);
  for (const auto* name : {"coherent", "skewed"}) {
    const auto fam = std::string(name) == "coherent"
                         ? make_coherent_family(0.5, harmonic)
                         : make_skewed_family(0.5, 0.25, harmonic);
    const auto s = state1(0.8, -0.6);
    CHECK_NOTHROW(fam->validate_gradients(s, 1e-6));
  }
  const auto two = make_two_gaussian_family(0.6, 0.8, harmonic);
  ParameterState s;
  s.u = {-0.8, 1.0};
  s.v = {0.4, 0.1};
  CHECK_NOTHROW(two->validate_gradients(s, 1e-6));
}

TEST_CASE("hamilton flow") {
  const auto fam = make_coherent_family(0.5, Potential::harmonic(1.0));
  SUBCASE("harmonic coherent family traces the classical ellipse") {
    auto s = state1(1.0, 0.0);
    const double e0 = fam->energy(s);
    const double dt = 1e-3;
    const auto n = std::size_t(std::llround(10.0 * 2.0 * M_PI / dt));
    double drift = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      s = hamilton_flow_step(*fam, s, dt);
      if (k % 500 == 0) drift = std::max(drift, std::abs(fam->energy(s) - e0));
    }
    const double t = double(n) * dt;  // the classical ellipse at the end time
    CHECK(std::abs(s.u[0] - std::cos(t)) < 1e-6);
    CHECK(std::abs(s.v[0] + std::sin(t)) < 1e-6);
    CHECK(drift < 1e-8);
  }
  SUBCASE("free flow: p constant, q linear in t") {
    const auto free_fam = make_coherent_family(0.5, Potential::free_space());
    auto s = state1(0.0, 1.5);
    for (int k = 0; k < 1000; ++k) s = hamilton_flow_step(*free_fam, s, 1e-3);
    CHECK(s.v[0] == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(s.u[0] == doctest::Approx(1.5 * 1.0).epsilon(1e-12));
  }
  SUBCASE("time reversal returns the state") {
    auto s = state1(0.9, -0.4);
    auto f = s;
    for (int k = 0; k < 500; ++k) f = hamilton_flow_step(*fam, f, 1e-3);
    for (int k = 0; k < 500; ++k) f = hamilton_flow_step(*fam, f, -1e-3);
    CHECK(std::abs(f.u[0] - s.u[0]) < 1e-10);
    CHECK(std::abs(f.v[0] - s.v[0]) < 1e-10);
  }
  SUBCASE("per-step energy drift at dt = 1e-3 stays under 1e-10") {
    auto s = state1(1.0, 0.0);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      const double e_before = fam->energy(s);
      s = hamilton_flow_step(*fam, s, 1e-3);
      worst = std::max(worst, std::abs(fam->energy(s) - e_before));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("flux flow") {
  const auto harmonic = Potential::harmonic(1.0);
  SUBCASE("coherent family: flux step coincides with the Hamilton step") {
    const auto fam = make_coherent_family(0.5, harmonic);
    const auto s = state1(0.8, 0.5);
    const auto a = hamilton_flow_step(*fam, s, 1e-3);
    const auto b = flux_flow_step(*fam, s, 1e-3);
    CHECK(std::abs(a.u[0] - b.u[0]) < 1e-10);
    CHECK(std::abs(a.v[0] - b.v[0]) < 1e-10);
  }
  SUBCASE("zero dt is the identity") {
    const auto fam = make_coherent_family(0.5, harmonic);
    const auto s = state1(0.8, 0.5);
    const auto b = flux_flow_step(*fam, s, 0.0);
    CHECK(b.u[0] == s.u[0]);
    CHECK(b.v[0] == s.v[0]);
  }
  SUBCASE("skewed family differs from the Hamilton flow") {
    const auto fam = make_skewed_family(0.5, 0.3, harmonic);
    auto a = state1(0.8, 0.5), b = a;
    for (int k = 0; k < 200; ++k) {
      a = hamilton_flow_step(*fam, a, 1e-3);
      b = flux_flow_step(*fam, b, 1e-3);
    }
    CHECK(std::abs(a.u[0] - b.u[0]) + std::abs(a.v[0] - b.v[0]) > 1e-7);
  }
  SUBCASE("the flux generator is conserved per step") {
    const auto fam = make_skewed_family(0.5, 0.3, harmonic);
    auto s = state1(0.8, 0.5);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      const double g0 = flux_flow_generator(*fam, s);
      s = flux_flow_step(*fam, s, 1e-3);
      worst = std::max(worst, std::abs(flux_flow_generator(*fam, s) - g0));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("alternating composition") {
  const auto harmonic = Potential::harmonic(1.0);
  SUBCASE("coherent family: identical to the pure Hamilton flow") {
    const auto fam = make_coherent_family(0.5, harmonic);
    auto h = state1(1.0, 0.0);
    const auto rep = alternate_compose(*fam, h, 1e-3, 2000);
    for (int k = 0; k < 2000; ++k) h = hamilton_flow_step(*fam, h, 1e-3);
    CHECK(std::abs(rep.final_state.u[0] - h.u[0]) < 1e-9);
    CHECK(std::abs(rep.final_state.v[0] - h.v[0]) < 1e-9);
  }
  SUBCASE("n = 0 leaves the state unchanged") {
    const auto fam = make_coherent_family(0.5, harmonic);
    const auto s = state1(0.3, 0.2);
    const auto rep = alternate_compose(*fam, s, 1e-3, 0);
    CHECK(rep.final_state.u[0] == s.u[0]);
    CHECK(rep.final_state.v[0] == s.v[0]);
  }
  SUBCASE("halving dt shrinks the composition defect about fourfold") {
    const auto fam = make_skewed_family(0.5, 0.3, harmonic);
    const auto s = state1(0.8, 0.5);
    const double T = 0.5;
    auto run = [&](double dt) {
      return alternate_compose(*fam, s, dt, std::size_t(std::llround(T / dt))).final_state;
    };
    const auto ref = run(1.0 / 8192.0);
    const auto a = run(1.0 / 256.0);
    const auto b = run(1.0 / 512.0);
    const double da = std::abs(a.u[0] - ref.u[0]) + std::abs(a.v[0] - ref.v[0]);
    const double db = std::abs(b.u[0] - ref.u[0]) + std::abs(b.v[0] - ref.v[0]);
    CHECK(da / db == doctest::Approx(4.0).epsilon(0.35));
  }
}

TEST_CASE("well-posedness determinant") {
  const auto harmonic = Potential::harmonic(1.0);
  SUBCASE("vanishes along the exact coherent flow") {
    const auto fam = make_coherent_family(0.5, harmonic);
    auto s = state1(1.0, 0.0);
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
      s = hamilton_flow_step(*fam, s, 1e-3);
      worst = std::max(worst, std::abs(wellposedness_determinant(*fam, s)[0]));
    }
    CHECK(worst < 1e-8);
  }
  SUBCASE("flags the skewed family") {
    const auto fam = make_skewed_family(0.5, 0.3, harmonic);
    const auto det = wellposedness_determinant(*fam, state1(0.8, 0.5));
    CHECK(std::abs(det[0]) > 1e-6);
  }
  SUBCASE("zero rows for a static state with no flux") {
    const auto fam = make_coherent_family(0.5, Potential::free_space());
    const auto det = wellposedness_determinant(*fam, state1(0.4, 0.0));
    CHECK(std::abs(det[0]) < 1e-12);
  }
}

TEST_CASE("dynamical pair check") {
  const auto harmonic = Potential::harmonic(1.0);
  SUBCASE("coherent family passes at 1e-10") {
    const auto fam = make_coherent_family(0.5, harmonic);
    CHECK(dynamical_pair_check(*fam, state1(1.0, 0.7), 1e-10)[0]);
  }
  SUBCASE("skewed family fails") {
    const auto fam = make_skewed_family(0.5, 0.3, harmonic);
    CHECK(!dynamical_pair_check(*fam, state1(1.0, 0.7), 1e-10)[0]);
  }
  SUBCASE("two far Gaussians pass at 1e-6, overlapping ones fail") {
    const auto fam = make_two_gaussian_family(0.6, 0.8, Potential::free_space());
    ParameterState far;
    far.u = {-8.0, 8.0};
    far.v = {0.4, -0.2};
    const auto ok = dynamical_pair_check(*fam, far, 1e-6);
    CHECK(ok[0]);
    CHECK(ok[1]);
    ParameterState close;
    close.u = {-0.4, 0.4};
    close.v = {0.8, -0.8};
    const auto bad = dynamical_pair_check(*fam, close, 1e-6);
    CHECK(!(bad[0] && bad[1]));
  }
}

TEST_CASE("ihbar <psi|psidot> reconstruction (flux identity)") {
  const auto fam = make_skewed_family(0.5, 0.3, Potential::harmonic(1.0));
  const auto s = state1(0.8, 0.5);
  const std::vector<double> du = {0.35};
  const std::vector<double> dv = {-0.6};
  const double from_fluxes = du[0] * fam->flux_u(s)[0] + dv[0] * fam->flux_v(s)[0];
  const double direct = fam->flux_functional_quadrature(s, du, dv);
  CHECK(std::abs(from_fluxes - direct) < 1e-8);
}

TEST_CASE("loop action invariance") {
  const auto harmonic = Potential::harmonic(1.0);
  const auto fam = make_coherent_family(0.5, harmonic);
  SUBCASE("zero-radius loop integrates to zero") {
    std::vector<ParameterState> loop(8, state1(1.0, 0.0));
    const auto act = loop_action_invariant(*fam, loop, 1e-3, 0.1);
    CHECK(act.before == 0.0);
    CHECK(std::abs(act.after) < 1e-12);
  }
  SUBCASE("free shear flow preserves the area while shearing") {
    const auto free_fam = make_coherent_family(0.5, Potential::free_space());
    std::vector<ParameterState> loop;
    const std::size_t nv = 128;
    for (std::size_t i = 0; i < nv; ++i) {
      const double th = 2.0 * M_PI * double(i) / double(nv);
      loop.push_back(state1(0.4 * std::cos(th), 0.4 * std::sin(th)));
    }
    loop.push_back(loop.front());
    const double T = 1.5;
    const auto act = loop_action_invariant(*free_fam, loop, 1e-3, T);
    CHECK(std::abs(act.after - act.before) / std::abs(act.before) < 1e-3);
    // the loop has visibly sheared: u picks up v T
    double max_shift = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i)
      max_shift = std::max(max_shift, std::abs(act.transported[i].u[0] -
                                               (loop[i].u[0] + loop[i].v[0] * T)));
    CHECK(max_shift < 1e-6);
  }
  SUBCASE("unclosed loops are rejected") {
    std::vector<ParameterState> loop = {state1(0, 0), state1(1, 0)};
    CHECK_THROWS_AS(loop_action_invariant(*fam, loop, 1e-3, 0.1), domain_error);
  }
}
