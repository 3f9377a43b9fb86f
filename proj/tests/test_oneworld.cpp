#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "ow/errors.hpp"
#include "ow/feynman_kac.hpp"
#include "ow/observables.hpp"
#include "ow/rng.hpp"
#include "ow/sde.hpp"
#include "ow/stats.hpp"

#include "oracles.hpp"

using namespace ow;

namespace {

SchrodingerField plane_wave_field(const Grid& g, double p0) {
  return oracles::field_from(g, [&](double q) {
    return std::complex<double>(std::cos(p0 * q), std::sin(p0 * q));
  });
}

double commensurate_momentum(const Grid& g, double target) {
  const double dk = 2.0 * M_PI / g.length(0);
  return dk * std::round(target / dk);
}

// Single-snapshot sequence: drift queries are valid at t = f.time only.
FieldSequence static_sequence(const SchrodingerField& f) {
  SplitStepPropagator prop(f.grid, Potential::free_space(), f.hbar, f.mass);
  return FieldSequence::record(prop, f, 1e-3, 0, 1);
}

}  // namespace

TEST_CASE("counter RNG is reproducible and stream-independent") {
  PathRng a(123, 5), b(123, 5), c(123, 6);
  const auto za = a.normal2(10, 0);
  const auto zb = b.normal2(10, 0);
  const auto zc = c.normal2(10, 0);
  CHECK(za[0] == zb[0]);
  CHECK(za[1] == zb[1]);
  CHECK(za[0] != zc[0]);
}

TEST_CASE("Wiener increment statistics: <dW^2> = 2 D dt") {
  const double hbar = 1.0, mass = 1.0, dt = 1e-3;
  const double d_const = hbar / (2.0 * mass);
  PathRng rng(99, 0);
  const std::size_t n = 1000000;
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dw = std::sqrt(hbar / mass * dt) * rng.normal(k, 3);
    sum += dw * dw;
    sum2 += dw * dw * dw * dw;
  }
  const double mean = sum / double(n);
  const double var = sum2 / double(n) - mean * mean;
  const double se = std::sqrt(var / double(n));
  CHECK(std::abs(mean - 2.0 * d_const * dt) < 3.0 * se);
}

TEST_CASE("drift velocity") {
  const auto g = Grid::line(-10.0, 10.0, 512);
  SUBCASE("plane-wave-like field gives p0/m everywhere") {
    const double p0 = commensurate_momentum(g, 2.0);
    const auto seq = static_sequence(plane_wave_field(g, p0));
    for (double x : {-7.3, -1.1, 0.0, 2.6, 8.9})
      CHECK(seq.drift({x, 0.0}, 0.0)[0] == doctest::Approx(p0).epsilon(1e-9));
    bool masked = true;
    seq.drift({0.0, 0.0}, 0.0, &masked);
    CHECK(!masked);
  }
  SUBCASE("real field drifts nowhere") {
    auto f = oracles::field_from(g, [](double q) {
      return std::complex<double>(std::exp(-0.1 * q * q), 0.0);
    });
    const auto seq = static_sequence(f);
    for (double x : {-3.0, 0.0, 1.5}) CHECK(std::abs(seq.drift({x, 0.0}, 0.0)[0]) < 1e-12);
  }
  SUBCASE("coherent state center moves at p0/m") {
    const auto pot = Potential::harmonic(1.0);
    auto f0 = init_coherent_state(g, 1.0, 0.0, 0.5);
    SplitStepPropagator prop(g, pot, 1.0, 1.0);
    const auto seq = FieldSequence::record(prop, f0, 1e-3, 800, 4);
    // q0(t) = cos t, p0(t) = -sin t for the natural-width packet
    for (double t : {0.2, 0.5, 0.75}) {
      const double q0 = std::cos(t);
      CHECK(seq.drift({q0, 0.0}, t)[0] == doctest::Approx(-std::sin(t)).epsilon(1e-4));
    }
  }
  SUBCASE("out-of-span time throws") {
    const auto seq = static_sequence(init_coherent_state(g, 0.0, 0.0, 0.5));
    CHECK_THROWS_AS(seq.drift({0.0, 0.0}, 5.0), domain_error);
  }
}

TEST_CASE("imaginary drift -(D/rho) grad rho") {
  const auto g = Grid::line(-12.0, 12.0, 1024);
  SUBCASE("uniform density: zero") {
    const auto f = plane_wave_field(g, commensurate_momentum(g, 1.0));
    CHECK(std::abs(imaginary_drift(f, {0.7, 0.0})[0]) < 1e-10);
  }
  SUBCASE("Gaussian: sign and value at one width") {
    // rho ~ exp(-(x-q0)^2/w^2) with w^2 = 1/(2 alpha)
    const double alpha = 0.5, q0 = 0.0;
    const auto f = init_coherent_state(g, q0, 0.0, alpha);
    const double w = 1.0 / std::sqrt(2.0 * alpha);
    const double d_const = 0.5;  // hbar/2m
    const double x = q0 + w;
    // -(D/rho) d rho/dx = D * 2 (x - q0) / w^2
    CHECK(imaginary_drift(f, {x, 0.0})[0] ==
          doctest::Approx(d_const * 2.0 * (x - q0) / (w * w)).epsilon(1e-6));
    CHECK(imaginary_drift(f, {x, 0.0})[0] > 0.0);
  }
  SUBCASE("zero at the density maximum") {
    const auto f = init_coherent_state(g, 1.0, 0.0, 0.5);
    // bounded by the cubic interpolation error of grad rho near its zero
    CHECK(std::abs(imaginary_drift(f, {1.0, 0.0})[0]) < 1e-5);
  }
}

TEST_CASE("step_path") {
  const auto g = Grid::line(-10.0, 10.0, 512);
  SUBCASE("zero-noise plane-wave drift moves exactly (p0/m) dt") {
    const double p0 = commensurate_momentum(g, 2.0);
    const auto seq = static_sequence(plane_wave_field(g, p0));
    PathState s;
    s.x = {0.3, 0.0};
    PathRng rng(1, 0);
    step_path(s, seq, 1e-3, rng, 0, 0.0);
    CHECK(s.x[0] == doctest::Approx(0.3 + p0 * 1e-3).epsilon(1e-12));
  }
  SUBCASE("same seed reproduces bitwise") {
    SplitStepPropagator prop(g, Potential::free_space(), 1.0, 1.0);
    const auto seq =
        FieldSequence::record(prop, init_coherent_state(g, 0.0, 0.0, 0.2), 1e-3, 2, 1);
    PathState a, b;
    a.x = b.x = {0.1, 0.0};
    PathRng rng(77, 3);
    step_path(a, seq, 1e-3, rng, 0);
    step_path(a, seq, 1e-3, rng, 1);
    PathRng rng2(77, 3);
    step_path(b, seq, 1e-3, rng2, 0);
    step_path(b, seq, 1e-3, rng2, 1);
    CHECK(a.x[0] == b.x[0]);
  }
  SUBCASE("rest Gaussian ensemble variance grows like (hbar/m) t") {
    const auto g2 = Grid::line(-60.0, 60.0, 1024);
    // broad packet: spreading time >> t
    const auto f0 = init_coherent_state(g2, 0.0, 0.0, 0.005);
    SplitStepPropagator prop(g2, Potential::free_space(), 1.0, 1.0);
    const double t = 0.5;
    const auto seq = FieldSequence::record(prop, f0, 1e-3, 500, 10);
    EnsembleOptions opt;
    opt.seed = 5;
    opt.n_paths = 4000;
    opt.dt = 1e-3;
    opt.n_steps = 500;
    opt.record_stride = 500;
    const auto ens = sample_ensemble(seq, opt);
    // variance of the displacement from launch
    std::vector<double> disp;
    for (const auto& p : ens.paths)
      disp.push_back(p.x.back()[0] - p.x.front()[0]);
    const double var = sample_variance(disp);
    // Var ~= t (hbar/m), dominated by the Wiener term; 3 sigma band for the
    // chi^2-distributed sample variance
    const double se = var * std::sqrt(2.0 / double(disp.size() - 1));
    CHECK(std::abs(var - t) < 3.0 * se + 0.01 * t);
  }
}

TEST_CASE("quantum Hamilton canonical pair") {
  const auto g = Grid::line(-16.0, 16.0, 1024);
  SUBCASE("free: P is constant along any realization") {
    const auto f0 = init_coherent_state(g, 0.0, 1.0, 0.25);
    SplitStepPropagator prop(g, Potential::free_space(), 1.0, 1.0);
    const auto seq = FieldSequence::record(prop, f0, 1e-3, 400, 4);
    const auto path =
        integrate_quantum_hamilton(0.2, seq, Potential::free_space(), 1e-3, 400, 11, 0);
    for (double p : path.p) CHECK(p == doctest::Approx(path.p.front()).epsilon(1e-12));
  }
  SUBCASE("harmonic with near-constant rho: dP/dt ~ -rho omega^2 X") {
    const auto g2 = Grid::line(-104.0, 104.0, 2048);
    const auto pot = Potential::harmonic(1.0);
    const auto f0 = init_coherent_state(g2, 0.0, 0.0, 0.002);  // broad
    SplitStepPropagator prop(g2, pot, 1.0, 1.0);
    const auto seq = FieldSequence::record(prop, f0, 1e-3, 200, 2);
    const auto path = integrate_quantum_hamilton(1.0, seq, pot, 1e-3, 200, 13, 1);
    // centered finite differences on the recorded arrays
    double worst = 0.0;
    for (std::size_t k = 10; k + 10 < path.p.size(); k += 10) {
      const double dpdt = (path.p[k + 1] - path.p[k - 1]) / (2.0 * 1e-3);
      const double rho = seq.rho({path.x[k][0], 0.0}, path.times[k]);
      const double expect = -rho * path.x[k][0];
      worst = std::max(worst, std::abs(dpdt - expect) / std::max(1e-6, std::abs(expect)));
    }
    CHECK(worst < 0.05);
  }
  SUBCASE("same seed bitwise") {
    const auto f0 = init_coherent_state(g, 0.0, 1.0, 0.25);
    SplitStepPropagator prop(g, Potential::free_space(), 1.0, 1.0);
    const auto seq = FieldSequence::record(prop, f0, 1e-3, 100, 4);
    const auto a =
        integrate_quantum_hamilton(0.0, seq, Potential::free_space(), 1e-3, 100, 21, 4);
    const auto b =
        integrate_quantum_hamilton(0.0, seq, Potential::free_space(), 1e-3, 100, 21, 4);
    for (std::size_t k = 0; k < a.x.size(); ++k) CHECK(a.x[k][0] == b.x[k][0]);
  }
}

TEST_CASE("classical limit trajectory") {
  SUBCASE("harmonic: q(t) = cos t over ten periods") {
    const auto pot = Potential::harmonic(1.0);
    const double dt = 5e-5;
    const auto n = std::size_t(std::llround(10.0 * 2.0 * M_PI / dt));
    const auto path = classical_limit_trajectory(1.0, 0.0, pot, 1.0, dt, n);
    double worst = 0.0;
    for (std::size_t k = 0; k < path.times.size(); k += 1000)
      worst = std::max(worst, std::abs(path.x[k][0] - std::cos(path.times[k])));
    CHECK(worst < 1e-6);
  }
  SUBCASE("leapfrog energy drift stays under 1e-8 for 1e5 steps") {
    const auto pot = Potential::harmonic(1.0);
    const double dt = 1e-4;
    const auto path = classical_limit_trajectory(1.0, 0.0, pot, 1.0, dt, 100000);
    const auto energy = [&](std::size_t k) {
      return 0.5 * path.p[k] * path.p[k] + 0.5 * path.x[k][0] * path.x[k][0];
    };
    const double e0 = energy(0);
    double worst = 0.0;
    for (std::size_t k = 0; k < path.times.size(); k += 997)
      worst = std::max(worst, std::abs(energy(k) - e0));
    CHECK(worst < 1e-8);
  }
  SUBCASE("free particle runs straight") {
    const auto path =
        classical_limit_trajectory(0.5, 2.0, Potential::free_space(), 1.0, 1e-3, 1000);
    CHECK(path.x.back()[0] == doctest::Approx(0.5 + 2.0 * 1.0).epsilon(1e-12));
  }
}

TEST_CASE("ensembles") {
  SUBCASE("empty ensemble") {
    const auto g = Grid::line(-10.0, 10.0, 256);
    const auto seq = static_sequence(init_coherent_state(g, 0.0, 0.0, 0.5));
    EnsembleOptions opt;
    opt.n_paths = 0;
    const auto ens = sample_ensemble(seq, opt);
    CHECK(ens.paths.empty());
    CHECK(ens.endpoints_x.empty());
  }
  SUBCASE("endpoint KS distance against the grid density") {
    const auto g = Grid::line(-24.0, 24.0, 1024);
    const auto f0 = init_coherent_state(g, 0.0, 0.0, 0.125);
    SplitStepPropagator prop(g, Potential::free_space(), 1.0, 1.0);
    const auto seq = FieldSequence::record(prop, f0, 1e-3, 1000, 10);
    const auto f1 = prop.propagate_complex(f0, 1e-3, 1000);
    const GridCdf ref(density(f1), g.lo[0], g.spacing(0));
    EnsembleOptions opt;
    opt.seed = 31;
    opt.n_paths = 10000;
    opt.dt = 1e-3;
    opt.n_steps = 1000;
    const auto ens = sample_ensemble(seq, opt);
    CHECK(ks_distance(ens.endpoints_x, ref) < 2.5 / std::sqrt(10000.0));
  }
}

TEST_CASE("increment variance is dt-independent (nondifferentiability signature)") {
  const auto g = Grid::line(-60.0, 60.0, 1024);
  const auto f0 = init_coherent_state(g, 0.0, 0.0, 0.005);
  SplitStepPropagator prop(g, Potential::free_space(), 1.0, 1.0);
  const auto seq = FieldSequence::record(prop, f0, 1e-3, 512, 8);
  EnsembleOptions opt;
  opt.seed = 17;
  opt.n_paths = 3000;
  opt.dt = 1e-3;
  opt.n_steps = 512;
  opt.record_stride = 1;
  const auto ens = sample_ensemble(seq, opt);

  double prev_ratio = 0.0;
  for (const std::size_t lag : {1, 2, 4}) {
    std::vector<double> inc2;
    for (const auto& p : ens.paths)
      for (std::size_t k = 100; k + lag < p.x.size(); k += 4 * lag) {
        const double dx = p.x[k + lag][0] - p.x[k][0];
        inc2.push_back(dx * dx);
      }
    const double mean = sample_mean(inc2);
    const double se = std::sqrt(sample_variance(inc2) / double(inc2.size()));
    const double ratio = mean / (double(lag) * opt.dt);
    // <dX^2>/dt must equal hbar/m = 1 independent of the lag
    CHECK(std::abs(ratio - 1.0) < 3.0 * se / (double(lag) * opt.dt) + 0.02);
    if (prev_ratio != 0.0) CHECK(std::abs(ratio - prev_ratio) < 0.03);
    prev_ratio = ratio;
  }
}

TEST_CASE("Feynman-Kac estimates") {
  SUBCASE("V = 0 reproduces the heat kernel") {
    const double D = 0.5, t = 1.0, x = 0.8;
    const auto est =
        feynman_kac_estimate(Potential::free_space(), 1.0, D, x, t, 20000, 100, 3);
    const double kernel = std::exp(-x * x / (4.0 * D * t)) / std::sqrt(4.0 * M_PI * D * t);
    CHECK(est.value == doctest::Approx(kernel).epsilon(1e-12));
    CHECK(est.std_error == 0.0);
  }
  SUBCASE("constant V factorizes exactly") {
    const double v0 = 0.7, lambda = 1.3, D = 0.5, t = 0.9, x = -0.4;
    const auto g = Grid::line(-10.0, 10.0, 256);
    const auto pot = Potential::sampled(g, std::vector<double>(g.size(), v0));
    const auto est = feynman_kac_estimate(pot, lambda, D, x, t, 5000, 64, 4);
    const double kernel = std::exp(-x * x / (4.0 * D * t)) / std::sqrt(4.0 * M_PI * D * t);
    CHECK(est.value == doctest::Approx(kernel * std::exp(-lambda * v0 * t)).epsilon(1e-10));
  }
  SUBCASE("t <= 0 is rejected") {
    CHECK_THROWS_AS(feynman_kac_estimate(Potential::free_space(), 1.0, 0.5, 0.0, -1.0, 10,
                                         10, 0),
                    domain_error);
  }
}
