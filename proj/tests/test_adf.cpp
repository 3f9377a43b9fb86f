#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "ow/adf.hpp"
#include "ow/errors.hpp"
#include "ow/observables.hpp"
#include "ow/propagator.hpp"

using namespace ow;

namespace {

AdfState make_state(double q0, double p0, double c0, double d0 = 0.0, double mass = 1.0) {
  AdfState s;
  s.center = {q0, p0, 0.0, mass, 0.0};
  s.bundle = make_parallel_bundle(s.center);
  s.exponent = make_exponent(c0, d0, s.bundle);
  return s;
}

std::complex<double> overlap(const SchrodingerField& a, const SchrodingerField& b) {
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < a.grid.size(); ++i) s += std::conj(a.psi(i)) * b.psi(i);
  return s * a.grid.cell_volume() / std::sqrt(a.norm() * b.norm());
}

}  // namespace

TEST_CASE("hj_step") {
  SUBCASE("free particle accumulates S = p^2 t / 2m exactly") {
    ClassicalCenter c{0.0, 2.0, 0.0, 1.0, 0.0};
    for (int k = 0; k < 1000; ++k) c = hj_step(c, Potential::free_space(), 1e-3);
    CHECK(c.action == doctest::Approx(2.0 * 2.0 / 2.0 * 1.0).epsilon(1e-13));
    CHECK(c.q == doctest::Approx(2.0).epsilon(1e-13));
  }
  SUBCASE("harmonic returns after one period") {
    const auto pot = Potential::harmonic(1.0);
    ClassicalCenter c{1.0, 0.0, 0.0, 1.0, 0.0};
    const double dt = 1e-4;
    const auto n = std::size_t(std::llround(2.0 * M_PI / dt));
    for (std::size_t k = 0; k < n; ++k) c = hj_step(c, pot, dt);
    // residual from the leftover fraction of a step plus leapfrog phase error
    CHECK(std::abs(c.q - std::cos(c.time)) < 1e-8);
    CHECK(std::abs(c.p + std::sin(c.time)) < 1e-8);
  }
  SUBCASE("a constant shift lowers the action by V0 t") {
    const auto g = Grid::line(-10.0, 10.0, 64);
    const double v0 = 0.7;
    const auto pot = Potential::sampled(g, std::vector<double>(g.size(), v0));
    ClassicalCenter a{0.0, 1.0, 0.0, 1.0, 0.0}, b = a;
    for (int k = 0; k < 500; ++k) {
      a = hj_step(a, Potential::free_space(), 1e-3);
      b = hj_step(b, pot, 1e-3);
    }
    CHECK(a.action - b.action == doctest::Approx(v0 * 0.5).epsilon(1e-10));
  }
}

TEST_CASE("deviation_step") {
  SUBCASE("free parallel bundle keeps sigma") {
    auto b = make_parallel_bundle({0.0, 1.0, 0.0, 1.0, 0.0});
    const double s0 = b.sigma();
    for (int k = 0; k < 1000; ++k) b = deviation_step(b, Potential::free_space(), 1e-3);
    CHECK(b.sigma() == doctest::Approx(s0).epsilon(1e-13));
  }
  SUBCASE("free momentum-offset bundle grows linearly") {
    auto b = make_momentum_bundle({0.0, 0.0, 0.0, 1.0, 0.0}, 1e-5);
    CHECK(b.sigma() == 0.0);
    for (int k = 0; k < 1000; ++k) b = deviation_step(b, Potential::free_space(), 1e-3);
    // sigma(t) = delta_p * t / m
    CHECK(b.sigma() == doctest::Approx(1e-5 * 1.0).epsilon(1e-10));
  }
  SUBCASE("harmonic parallel bundle follows cos(omega t) with quarter-period zeros") {
    const auto pot = Potential::harmonic(1.0);
    auto b = make_parallel_bundle({0.5, 0.0, 0.0, 1.0, 0.0});
    const double s0 = b.sigma();
    const double dt = 1e-4;
    double t = 0.0;
    double near_quarter = 1.0;
    for (int k = 0; k < 31416; ++k) {
      b = deviation_step(b, pot, dt);
      t += dt;
      CHECK(b.sigma() == doctest::Approx(s0 * std::cos(t)).epsilon(1e-6));
      if (std::abs(t - M_PI / 2.0) < dt) near_quarter = std::abs(b.sigma() / s0);
    }
    CHECK(near_quarter < 1e-3);
  }
}

TEST_CASE("exponent_step") {
  SUBCASE("free parallel bundle: c constant, d grows as 2 hbar t / m") {
    auto s = make_state(0.0, 1.0, 1.5);
    for (int k = 0; k < 2000; ++k) s = adf_rk4_step(s, Potential::free_space(), 1.0, 1e-3);
    CHECK(s.exponent.c == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(s.exponent.d == doctest::Approx(2.0 * 1.0 * 2.0 / 1.0).epsilon(1e-12));
  }
  SUBCASE("hbar = 0: d stays zero and c rescales as sigma^2") {
    const auto pot = Potential::harmonic(1.0);
    auto s = make_state(1.0, 0.0, 2.0);
    for (int k = 0; k < 1000; ++k) s = adf_rk4_step(s, pot, 0.0, 1e-3);
    CHECK(s.exponent.d == 0.0);
    const double j1 = s.bundle.sigma() / s.exponent.sigma0;
    CHECK(s.exponent.c == doctest::Approx(2.0 * j1 * j1).epsilon(1e-9));
  }
  SUBCASE("standalone step matches the coupled integrator") {
    const auto pot = Potential::harmonic(1.0);
    auto s = make_state(1.0, 0.0, 2.0);
    const auto via_coupled = adf_rk4_step(s, pot, 1.0, 1e-3).exponent;
    const auto via_op = exponent_step(s.exponent, s.bundle, pot, 1.0, 1e-3);
    CHECK(via_op.c == doctest::Approx(via_coupled.c).epsilon(1e-14));
    CHECK(via_op.d == doctest::Approx(via_coupled.d).epsilon(1e-14));
  }
}

TEST_CASE("wronskian invariant") {
  SUBCASE("conserved to 1e-8 over 1e4 steps (harmonic, through caustics)") {
    const auto pot = Potential::harmonic(1.0);
    const auto traj = propagate_adf(make_state(1.0, 0.0, 1.3), pot, 1.0, 1e-3, 10000, 1);
    double peak = 0.0;
    for (const auto& r : traj.rows) peak = std::max(peak, std::abs(r.sigma));
    double worst = 0.0;
    for (const auto& r : traj.rows) {
      if (std::abs(r.sigma) < 1e-3 * peak) continue;
      worst = std::max(worst, std::abs(r.wronskian - 2.0));
    }
    CHECK(worst < 1e-8);
  }
  SUBCASE("scales linearly in hbar and inversely in mass") {
    const auto pot = Potential::harmonic(1.0);
    auto s = make_state(1.0, 0.0, 1.0);
    for (int k = 0; k < 100; ++k) s = adf_rk4_step(s, pot, 2.0, 1e-3);
    CHECK(wronskian(s.bundle, s.exponent, 2.0) == doctest::Approx(4.0).epsilon(1e-10));
    auto s2 = make_state(1.0, 0.0, 1.0, 0.0, 2.0);  // mass 2 halves 2 hbar/m
    for (int k = 0; k < 100; ++k) s2 = adf_rk4_step(s2, pot, 1.0, 1e-3);
    CHECK(wronskian(s2.bundle, s2.exponent, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("maslov counting") {
  const auto pot = Potential::harmonic(1.0);
  SUBCASE("one period gives M = 2, half a period gives M = 1") {
    const double dt = 1e-3;
    const auto full = propagate_adf(make_state(1.0, 0.0, 1.0), pot, 1.0, dt,
                                    std::size_t(std::llround(2.0 * M_PI / dt)), 1);
    std::vector<double> sigma;
    for (const auto& r : full.rows) sigma.push_back(r.sigma);
    CHECK(maslov_update(sigma) == 2);
    CHECK(full.final_state.exponent.maslov == 2);
    std::vector<double> half(sigma.begin(), sigma.begin() + long(sigma.size() / 2));
    CHECK(maslov_update(half) == 1);
  }
  SUBCASE("free particle never crosses") {
    const auto traj =
        propagate_adf(make_state(0.0, 1.0, 1.0), Potential::free_space(), 1.0, 1e-3, 2000, 1);
    std::vector<double> sigma;
    for (const auto& r : traj.rows) sigma.push_back(r.sigma);
    CHECK(maslov_update(sigma) == 0);
  }
  SUBCASE("grazing zeros are rejected") {
    // sigma dips below tolerance and returns with the same sign
    const std::vector<double> graze = {1.0, 0.5, 1e-12, 0.5, 1.0};
    CHECK_THROWS_AS(maslov_update(graze), domain_error);
  }
}

TEST_CASE("caustic passage stays finite and matches the predicted limit") {
  const auto pot = Potential::harmonic(1.0);
  const double hbar = 1.0, mass = 1.0, c0 = 1.3;
  const auto traj = propagate_adf(make_state(1.0, 0.0, c0), pot, hbar, 1e-3, 3000, 1);
  const auto cc = caustic_limit_check(traj, hbar, mass);
  CHECK(cc.peak == doctest::Approx(cc.predicted).epsilon(0.05));
  CHECK(cc.d_slope == doctest::Approx(cc.d_slope_expected).epsilon(0.05));

  // x100 smaller peak at 10x hbar
  const auto traj10 = propagate_adf(make_state(1.0, 0.0, c0), pot, 10.0, 1e-3, 3000, 1);
  const auto cc10 = caustic_limit_check(traj10, 10.0, mass);
  CHECK(cc10.peak == doctest::Approx(cc.peak / 100.0).epsilon(0.05));
}

TEST_CASE("evaluate_adf") {
  const auto grid = Grid::line(-24.0, 24.0, 2048);
  SUBCASE("t = 0 with d = 0 is a real envelope times a plane wave") {
    const auto s = make_state(0.3, 1.1, 2.0);
    const auto f = evaluate_adf(s.center, s.exponent, s.bundle, grid, 1.0);
    CHECK(std::abs(f.norm() - 1.0) < 1e-10);
    // |psi| is the Gaussian envelope
    for (std::size_t i = 0; i < grid.size(); i += 64) {
      const double x = grid.coord(0, i) - 0.3;
      // |g| exp(-x^2/c) with g = (2/pi)^{1/4} c^{-1/4} at d = 0
      const double expect =
          std::pow(2.0 / M_PI, 0.25) * std::pow(2.0, -0.25) * std::exp(-x * x / 2.0);
      CHECK(std::abs(std::abs(f.psi(i)) - expect) < 1e-12);
    }
  }
  SUBCASE("free packet equals the grid propagation") {
    const auto pot = Potential::free_space();
    auto s = make_state(-2.0, 1.0, 4.0);
    const auto f0 = evaluate_adf(s.center, s.exponent, s.bundle, grid, 1.0);
    SplitStepPropagator prop(grid, pot, 1.0, 1.0);
    const auto f_grid = prop.propagate_complex(f0, 1e-3, 2000);
    for (int k = 0; k < 2000; ++k) s = adf_rk4_step(s, pot, 1.0, 1e-3);
    const auto f_adf = evaluate_adf(s.center, s.exponent, s.bundle, grid, 1.0);
    double err2 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      err2 += std::norm(f_adf.psi(i) - f_grid.psi(i));
    CHECK(std::sqrt(err2 * grid.cell_volume()) < 1e-4);
  }
  SUBCASE("harmonic overlaps the grid near the quarter period and at a full period") {
    const auto pot = Potential::harmonic(1.0);
    auto s = make_state(1.0, 0.0, 1.3);
    const auto f0 = evaluate_adf(s.center, s.exponent, s.bundle, grid, 1.0);
    SplitStepPropagator prop(grid, pot, 1.0, 1.0);
    const double dt = 1e-3;
    const auto n_quarter = std::size_t(std::llround((M_PI / 2.0 - 0.05) / dt));
    const auto f_grid_q = prop.propagate_complex(f0, dt, n_quarter);
    auto sq = s;
    for (std::size_t k = 0; k < n_quarter; ++k) sq = adf_rk4_step(sq, pot, 1.0, dt);
    const auto f_adf_q = evaluate_adf(sq.center, sq.exponent, sq.bundle, grid, 1.0);
    CHECK(std::abs(overlap(f_adf_q, f_grid_q)) > 0.999);

    const auto n_full = std::size_t(std::llround(2.0 * M_PI / dt));
    const auto f_grid_f = prop.propagate_complex(f0, dt, n_full);
    auto sf = s;
    for (std::size_t k = 0; k < n_full; ++k) sf = adf_rk4_step(sf, pot, 1.0, dt);
    const auto f_adf_f = evaluate_adf(sf.center, sf.exponent, sf.bundle, grid, 1.0);
    CHECK(std::abs(overlap(f_adf_f, f_grid_f)) > 0.999);

    // Maslov phase: the grid and ADF phases agree through two caustics
    CHECK(sf.exponent.maslov == 2);
    CHECK(std::abs(std::arg(overlap(f_adf_f, f_grid_f))) < 1e-2);
  }
  SUBCASE("escaping packets are rejected") {
    const auto s = make_state(22.0, 0.0, 1.0);
    CHECK_THROWS_AS(evaluate_adf(s.center, s.exponent, s.bundle, grid, 1.0), domain_error);
  }
}

TEST_CASE("semiclassical conservation laws") {
  SUBCASE("c sigma^-2 stays constant along the flow") {
    const auto pot = Potential::gaussian_barrier(1.5, 0.8);
    auto s = make_state(-4.0, 1.8, 1.0);
    const double ratio0 = s.exponent.c / (s.bundle.sigma() * s.bundle.sigma());
    for (int k = 0; k < 4000; ++k) {
      s = adf_rk4_step(s, pot, 1.0, 1e-3);
      const double sig = s.bundle.sigma();
      if (std::abs(sig) > 1e-3)
        CHECK(s.exponent.c / (sig * sig) == doctest::Approx(ratio0).epsilon(1e-8));
    }
  }
  SUBCASE("sigma^(1/2) F at the center is conserved in momentum-gradient-only mode") {
    // hbar = 0 freezes the quantum diffusion; |g| sqrt(sigma) must stay put
    const auto pot = Potential::harmonic(1.0);
    auto s = make_state(1.0, 0.0, 1.0);
    const double f0 = std::abs(adf_prefactor(s.exponent)) * std::sqrt(std::abs(s.bundle.sigma()));
    for (int k = 0; k < 1200; ++k) {
      s = adf_rk4_step(s, pot, 0.0, 1e-3);
      const double f = std::abs(adf_prefactor(s.exponent)) *
                       std::sqrt(std::abs(s.bundle.sigma()));
      CHECK(f == doctest::Approx(f0).epsilon(1e-9));
    }
  }
}
