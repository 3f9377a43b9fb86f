#include "ow/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "ow/adf.hpp"
#include "ow/branching.hpp"
#include "ow/config.hpp"
#include "ow/double_slit.hpp"
#include "ow/errors.hpp"
#include "ow/feynman_kac.hpp"
#include "ow/field_io.hpp"
#include "ow/kernels.hpp"
#include "ow/observables.hpp"
#include "ow/param_flows.hpp"
#include "ow/scenarios.hpp"
#include "ow/sde.hpp"
#include "ow/stats.hpp"
#include "ow/trial_family.hpp"

namespace ow::acceptance {

namespace {

struct Check {
  std::string name;
  std::function<bool(std::ostream&)> body;
};

double overlap_magnitude(const SchrodingerField& a, const SchrodingerField& b) {
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < a.grid.size(); ++i) s += std::conj(a.psi(i)) * b.psi(i);
  return std::abs(s) * a.grid.cell_volume() / std::sqrt(a.norm() * b.norm());
}

// --- C1 --------------------------------------------------------------------

bool c1_real_complex(std::ostream& os) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = Grid::line(-24.0, 24.0, 4096);
  const auto pot = Potential::harmonic(1.0);
  const auto f0 = init_coherent_state(grid, 1.0, 0.0, 0.5);
  SplitStepPropagator prop(grid, pot, 1.0, 1.0);
  const auto fc = prop.propagate_complex(f0, 1e-3, 10000);
  const auto fr = prop.propagate_real_vector(f0, 1e-3, 10000);
  const double dev = std::max(kernels::max_abs_diff(fc.phi_r, fr.phi_r),
                              kernels::max_abs_diff(fc.phi_c, fr.phi_c));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  os << "    max componentwise deviation " << dev << " (tol 1e-12), " << secs << " s";
  return dev < 1e-12 && secs < 30.0;
}

// --- C2 --------------------------------------------------------------------

bool c2_free_gaussian(std::ostream& os) {
  const auto grid = Grid::line(-30.0, 30.0, 2048);
  const auto pot = Potential::free_space();
  const double gamma = 0.25;  // width0^2 = 1/(4 gamma) = 1
  const auto f0 = init_coherent_state(grid, 0.0, 0.0, gamma);
  SplitStepPropagator prop(grid, pot, 1.0, 1.0);
  const double e0 = mean_energy(f0, pot);
  const double n0 = f0.norm();

  auto variance = [&](const SchrodingerField& f) {
    const double m1 = mean_position(f, 0);
    double s = 0.0;
    for (std::size_t i = 0; i < grid.n[0]; ++i) {
      const double x = grid.coord(0, i) - m1;
      s += x * x * f.rho(i);
    }
    return s * grid.cell_volume() / f.norm();
  };

  const double w0_sq = variance(f0);
  double worst_rel = 0.0, worst_norm = 0.0, worst_energy = 0.0;
  SchrodingerField f = f0;
  for (int leg = 1; leg <= 4; ++leg) {
    f = prop.propagate_complex(f, 1e-3, 500);
    const double t = f.time;
    const double expected = w0_sq + t * t / (4.0 * w0_sq);
    worst_rel = std::max(worst_rel, std::abs(variance(f) - expected) / expected);
    worst_norm = std::max(worst_norm, std::abs(f.norm() - n0));
    worst_energy = std::max(worst_energy, std::abs(mean_energy(f, pot) - e0));
  }
  os << "    width rel err " << worst_rel << " (1e-6), norm drift " << worst_norm
     << " (1e-10), energy drift " << worst_energy << " (1e-8)";
  return worst_rel < 1e-6 && worst_norm < 1e-10 && worst_energy < 1e-8;
}

// --- C3 --------------------------------------------------------------------

bool c3_continuity_order(std::ostream& os) {
  const auto grid = Grid::line(-30.0, 30.0, 2048);
  const auto pot = Potential::free_space();
  const auto f0 = init_coherent_state(grid, 0.0, 1.0, 0.25);
  SplitStepPropagator prop(grid, pot, 1.0, 1.0);
  std::vector<double> residuals;
  for (const double dt : {1e-3, 5e-4, 2.5e-4}) {
    const auto f1 = prop.propagate_complex(f0, dt, 1);
    residuals.push_back(continuity_residual(f0, f1));
  }
  const double o1 = std::log2(residuals[0] / residuals[1]);
  const double o2 = std::log2(residuals[1] / residuals[2]);
  os << "    residuals {" << residuals[0] << ", " << residuals[1] << ", " << residuals[2]
     << "}, measured orders " << o1 << ", " << o2 << " (>= 1.9)";
  return o1 >= 1.9 && o2 >= 1.9;
}

// --- C4 --------------------------------------------------------------------

bool c4_ensemble(std::ostream& os) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = Grid::line(-24.0, 24.0, 1024);
  const auto pot = Potential::free_space();
  const auto f0 = init_coherent_state(grid, 0.0, 0.0, 0.125);
  SplitStepPropagator prop(grid, pot, 1.0, 1.0);
  const auto seq = FieldSequence::record(prop, f0, 1e-3, 1000, 10);
  const auto f_end = prop.propagate_complex(f0, 1e-3, 1000);
  const GridCdf ref(density(f_end), grid.lo[0], grid.spacing(0));

  EnsembleOptions opt;
  opt.seed = 20260808;
  opt.dt = 1e-3;
  opt.n_steps = 1000;

  opt.n_paths = 10000;
  const double ks1 = ks_distance(sample_ensemble(seq, opt).endpoints_x, ref);
  opt.n_paths = 20000;
  const double ks2 = ks_distance(sample_ensemble(seq, opt).endpoints_x, ref);
  const double k1 = ks1 * std::sqrt(10000.0), k2 = ks2 * std::sqrt(20000.0);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  os << "    KS(1e4) = " << ks1 << " (< 0.025), KS(2e4) = " << ks2
     << ", scaled statistics " << k1 << ", " << k2 << " in [0.3, 2.4], " << secs << " s";
  return ks1 < 2.5 / std::sqrt(10000.0) && ks2 < 2.5 / std::sqrt(20000.0) && k1 > 0.3 &&
         k1 < 2.4 && k2 > 0.3 && k2 < 2.4 && secs < 30.0;
}

// --- C5 --------------------------------------------------------------------

bool c5_classical_limit(std::ostream& os) {
  const double omega = 1.0;
  const auto grid = Grid::line(-12.0, 12.0, 1024);
  const auto pot = Potential::harmonic(omega);
  // natural width: the drift field is exactly p0(t)/m everywhere
  const auto f0 = init_coherent_state(grid, 1.0, 0.0, omega / 2.0);
  SplitStepPropagator prop(grid, pot, 1.0, 1.0);
  const double T = 2.0 * M_PI / omega;
  const std::size_t grid_steps = std::size_t(std::ceil(T / 1e-3));
  const auto seq = FieldSequence::record(prop, f0, 1e-3, grid_steps, 1);

  const double dt = 1e-5;
  const auto n = std::size_t(T / dt);
  PathState s;
  s.x = {1.0, 0.0};
  PathRng rng(0, 0);
  const auto classical = classical_limit_trajectory(1.0, 0.0, pot, 1.0, dt, n);
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    step_path(s, seq, dt, rng, k, 0.0);  // Wiener term disabled
    worst = std::max(worst, std::abs(s.x[0] - classical.x[k + 1][0]));
  }
  os << "    max |X_t - classical| = " << worst << " (< 1e-4) over one period";
  return worst < 1e-4;
}

// --- C6 --------------------------------------------------------------------

DoubleSlitConfig slit_config() {
  DoubleSlitConfig cfg;
  cfg.grid = Grid::plane(-16.0, 16.0, 512, -24.0, 24.0, 512);
  cfg.potential = Potential::double_slit_mask(0.0, 0.4, {2.0, -2.0}, {0.7, 0.7}, 400.0);
  cfg.q0 = {-6.0, 0.0};
  cfg.p0 = {8.0, 0.0};
  cfg.gamma_r = {0.25, 1.0 / 36.0};
  cfg.dt = 1.25e-3;
  cfg.n_steps = 2000;
  cfg.detect_x = 8.0;
  cfg.bins = 97;  // odd: one bin centered on the symmetry axis
  cfg.seed = 7;
  cfg.save_every = 0;
  return cfg;
}

bool c6_double_slit(std::ostream& os) {
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = slit_config();
  cfg.n_paths = 100000;
  const auto two = double_slit_run(cfg);

  // fringe maxima vs the grid reference, within one bin, over the central
  // envelope |y| <= 8 where the pattern stands above counting noise
  auto windowed_maxima = [&](const std::vector<double>& y) {
    std::vector<double> smooth(y.size(), 0.0);
    for (std::size_t b = 1; b + 1 < y.size(); ++b)
      smooth[b] = 0.25 * y[b - 1] + 0.5 * y[b] + 0.25 * y[b + 1];
    auto m = local_maxima(smooth, 0.15);
    std::vector<std::size_t> central;
    for (auto b : m)
      if (std::abs(two.fringe.center(b)) <= 8.0) central.push_back(b);
    return central;
  };
  const auto hist_max = windowed_maxima(two.fringe.count);
  const auto ref_max = windowed_maxima(two.reference);
  bool aligned = !hist_max.empty() && hist_max.size() == ref_max.size();
  if (aligned)
    for (std::size_t i = 0; i < hist_max.size(); ++i)
      aligned = aligned && (std::llabs(long(hist_max[i]) - long(ref_max[i])) <= 1);

  // single-slit control rejects the two-slit profile
  auto cfg1 = slit_config();
  cfg1.n_paths = 20000;
  cfg1.potential = Potential::double_slit_mask(0.0, 0.4, {2.0, -2.0}, {0.7, 0.0}, 400.0);
  const auto one = double_slit_run(cfg1);
  double ref_total = 0.0;
  for (double v : two.reference) ref_total += v;
  double chi2 = 0.0;
  std::size_t dof = 0;
  const double n_detected = double(one.spot_y.size());
  for (std::size_t b = 0; b < two.reference.size(); ++b) {
    const double expected = n_detected * two.reference[b] / ref_total;
    if (expected < 5.0) continue;
    const double diff = one.fringe.count[b] - expected;
    chi2 += diff * diff / expected;
    ++dof;
  }
  const double crit = chi2_critical_99(dof > 1 ? dof - 1 : 1);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  os << "    " << two.n_detected << " spots, " << hist_max.size() << " fringe maxima vs "
     << ref_max.size() << " reference maxima (aligned: " << (aligned ? "yes" : "no")
     << "), control chi2 " << chi2 << " > crit " << crit << " (dof " << dof << "), " << secs
     << " s";
  return aligned && chi2 > crit && secs < 600.0;
}

// --- C7 --------------------------------------------------------------------

// Crank-Nicolson oracle for du/dt = D u'' - lambda V u, Thomas-solved.
// The delta initial condition is replaced by its exact short-time kernel
// at t0 (free heat kernel with the trapezoid potential factor, error
// O(t0^2)), which the grid resolves; a few implicit-Euler steps smooth the
// start before switching to CN.
std::vector<double> cn_reference(const Potential& v, double lambda, double D, double t,
                                 double lo, double hi, std::size_t n, std::size_t steps) {
  const double dx = (hi - lo) / double(n);
  const double t0 = 0.005;
  const double dt = (t - t0) / double(steps);
  std::vector<double> u(n, 0.0), vq(n);
  for (std::size_t i = 0; i < n; ++i) vq[i] = v.value1d(lo + double(i) * dx);
  for (std::size_t i = 0; i < n; ++i) {
    const double q = lo + double(i) * dx;
    u[i] = std::exp(-q * q / (4.0 * D * t0)) / std::sqrt(4.0 * M_PI * D * t0) *
           std::exp(-lambda * t0 * 0.5 * (vq[n / 2] + vq[i]));
  }

  const double r = D * dt / (dx * dx);
  auto solve_step = [&](double theta) {
    // (I - theta dt L) u_new = (I + (1-theta) dt L) u_old
    std::vector<double> a(n), b(n), c(n), rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double diag_l = -2.0 * D / (dx * dx) - lambda * vq[i];
      b[i] = 1.0 - theta * dt * diag_l;
      a[i] = -theta * r;
      c[i] = -theta * r;
      const double um = i > 0 ? u[i - 1] : 0.0;
      const double up = i + 1 < n ? u[i + 1] : 0.0;
      rhs[i] = u[i] + (1.0 - theta) * dt * (D * (up - 2.0 * u[i] + um) / (dx * dx) -
                                            lambda * vq[i] * u[i]);
    }
    // Thomas
    for (std::size_t i = 1; i < n; ++i) {
      const double m = a[i] / b[i - 1];
      b[i] -= m * c[i - 1];
      rhs[i] -= m * rhs[i - 1];
    }
    u[n - 1] = rhs[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) u[i] = (rhs[i] - c[i] * u[i + 1]) / b[i];
  };
  for (std::size_t s = 0; s < steps; ++s) solve_step(s < 4 ? 1.0 : 0.5);
  return u;
}

bool c7_feynman_kac(std::ostream& os) {
  const auto pot = Potential::harmonic(1.0);
  const double lambda = 1.0, D = 0.5, t = 1.0;
  const double lo = -12.0, hi = 12.0;
  const std::size_t n = 4096, steps = 20000;
  const auto ref = cn_reference(pot, lambda, D, t, lo, hi, n, steps);
  const double dx = (hi - lo) / double(n);

  bool ok = true;
  os << "    ";
  for (const double x : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    // evaluate both routes at the same grid node
    const auto i = std::size_t(std::llround((x - lo) / dx));
    const double x_node = lo + double(i) * dx;
    const auto est = feynman_kac_estimate(pot, lambda, D, x_node, t, 200000, 400, 99);
    const double reference = ref[i];
    const double dev = std::abs(est.value - reference);
    const bool pass = dev <= 3.0 * est.std_error + 1e-4;
    ok = ok && pass;
    os << "x=" << x_node << ": |" << est.value << "-" << reference << "|=" << dev
       << " vs 3SE " << 3.0 * est.std_error << (pass ? " ok; " : " FAIL; ");
  }
  return ok;
}

// --- C8 --------------------------------------------------------------------

bool c8_param_flows(std::ostream& os) {
  const auto pot = Potential::harmonic(1.0);
  const auto coherent = make_coherent_family(0.5, pot);
  ParameterState s;
  s.u = {1.2};
  s.v = {0.0};
  const double e0 = coherent->energy(s);
  const double dt = 1e-3;
  const auto n = std::size_t(std::llround(10.0 * 2.0 * M_PI / dt));
  ParameterState h = s;
  double drift = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    h = hamilton_flow_step(*coherent, h, dt);
    if (k % 100 == 0) drift = std::max(drift, std::abs(coherent->energy(h) - e0));
  }
  drift = std::max(drift, std::abs(coherent->energy(h) - e0));

  const auto pairs = dynamical_pair_check(*coherent, s, 1e-10);
  const bool coherent_pair = pairs[0];

  const auto skewed = make_skewed_family(0.5, 0.3, pot);
  const auto sk_pairs = dynamical_pair_check(*skewed, s, 1e-10);
  const bool skew_fails = !sk_pairs[0];

  // alternated flow differs measurably from the pure Hamilton flow
  ParameterState a = s, hm = s;
  const auto rep = alternate_compose(*skewed, a, dt, 2000);
  for (std::size_t k = 0; k < 2000; ++k) hm = hamilton_flow_step(*skewed, hm, dt);
  const double diff = std::max(std::abs(rep.final_state.u[0] - hm.u[0]),
                               std::abs(rep.final_state.v[0] - hm.v[0]));

  os << "    <H> drift " << drift << " (< 1e-8), coherent pair "
     << (coherent_pair ? "passes" : "FAILS") << ", skewed pair "
     << (skew_fails ? "fails as required" : "UNEXPECTEDLY PASSES")
     << ", |alternate - hamilton| = " << diff << " (> 1e-6)";
  return drift < 1e-8 && coherent_pair && skew_fails && diff > 1e-6;
}

// --- C9 --------------------------------------------------------------------

bool c9_loop(std::ostream& os) {
  const auto pot = Potential::harmonic(1.0);
  const auto fam = make_coherent_family(0.5, pot);
  const double r = 0.5;
  std::vector<ParameterState> loop;
  const std::size_t nv = 256;
  for (std::size_t i = 0; i < nv; ++i) {
    const double th = 2.0 * M_PI * double(i) / double(nv);
    ParameterState s;
    s.u = {1.0 + r * std::cos(th)};
    s.v = {r * std::sin(th)};
    loop.push_back(s);
  }
  loop.push_back(loop.front());
  const auto act = loop_action_invariant(*fam, loop, 1e-3, 2.0 * M_PI);
  const double rel = std::abs(act.after - act.before) / std::abs(act.before);
  os << "    loop action " << act.before << " -> " << act.after << ", rel change " << rel
     << " (< 1e-3); area = pi r^2 = " << M_PI * r * r;
  return rel < 1e-3;
}

// --- C10 -------------------------------------------------------------------

bool c10_wronskian(std::ostream& os) {
  bool ok = true;
  os << "    ";
  struct Run {
    const char* name;
    Potential pot;
    double q0, p0, c0;
  };
  const Run runs[] = {{"free", Potential::free_space(), -2.0, 1.0, 1.0},
                      {"harmonic", Potential::harmonic(1.0), 1.0, 0.0, 1.3},
                      {"barrier", Potential::gaussian_barrier(2.0, 0.5), -4.0, 2.4, 1.0}};
  AdfTrajectory harmonic_traj;
  for (const auto& run : runs) {
    AdfState s;
    s.center = {run.q0, run.p0, 0.0, 1.0, 0.0};
    s.bundle = make_parallel_bundle(s.center);
    s.exponent = make_exponent(run.c0, 0.0, s.bundle);
    const auto traj = propagate_adf(s, run.pot, 1.0, 1e-3, 10000, 1);
    double worst = 0.0;
    double peak = 0.0;
    for (const auto& row : traj.rows) peak = std::max(peak, std::abs(row.sigma));
    for (const auto& row : traj.rows) {
      if (std::abs(row.sigma) < 1e-3 * peak) continue;  // flagged caustic vicinity
      worst = std::max(worst, std::abs(row.wronskian - 2.0));
    }
    os << run.name << " dev " << worst << "; ";
    ok = ok && worst < 1e-8;
    if (std::string(run.name) == "harmonic") harmonic_traj = traj;
  }

  const auto cc = caustic_limit_check(harmonic_traj, 1.0, 1.0);
  const double rel = std::abs(cc.peak - cc.predicted) / cc.predicted;
  const double slope_rel = std::abs(cc.d_slope - cc.d_slope_expected) /
                           std::abs(cc.d_slope_expected);
  os << "caustic peak " << cc.peak << " vs predicted " << cc.predicted << " (rel " << rel
     << " < 0.05), d slope rel " << slope_rel;
  return ok && rel < 0.05 && slope_rel < 0.05;
}

// --- C11 -------------------------------------------------------------------

bool c11_wtransform(std::ostream& os) {
  const auto grid = Grid::line(-14.0, 14.0, 2048);
  auto tree = make_branch_root(0.0, 0.0, {1.0, 0.0}, 1.0, 1.0);
  WeierstrassPlan plan;
  plan.gamma2_r = 2.0;
  plan.n_quadrature = 32;
  const auto daughters = weierstrass_split(tree, 0, plan);
  const auto rec = reconstruct(tree, daughters, 0, grid);

  // momentum bookkeeping, bitwise from stored values
  bool bitwise = true;
  for (auto di : daughters) {
    const auto& n = tree.nodes[di];
    const double expect = n.parent_p - 2.0 * tree.hbar * n.gamma1c * n.omega;
    bitwise = bitwise && (n.state.center.p == expect);
  }

  // phase-carrying mother: p0 != 0, gamma1c != 0
  auto tree2 = make_branch_root(0.0, 1.0, {1.0, 0.5}, 1.0, 1.0);
  const auto d2 = weierstrass_split(tree2, 0, plan);
  const auto rec2 = reconstruct(tree2, d2, 0, grid);
  bool bitwise2 = true;
  for (auto di : d2) {
    const auto& n = tree2.nodes[di];
    const double expect = n.parent_p - 2.0 * tree2.hbar * n.gamma1c * n.omega;
    bitwise2 = bitwise2 && (n.state.center.p == expect);
  }

  os << "    32-node L2 error " << rec.l2_error << " (< 1e-10), phase-carrying L2 "
     << rec2.l2_error << " (< 1e-8), momentum shifts bitwise: "
     << ((bitwise && bitwise2) ? "yes" : "no");
  return rec.l2_error < 1e-10 && rec2.l2_error < 1e-8 && bitwise && bitwise2;
}

// --- C12 -------------------------------------------------------------------

bool c12_branching(std::ostream& os) {
  const double hbar = 1.0, mass = 1.0;
  const auto pot = Potential::gaussian_barrier(1.4, 0.5);  // narrower than the mother
  const auto grid = Grid::line(-60.0, 60.0, 8192);
  const double gamma1 = 0.5, q0 = -5.0, p0 = 2.2;
  const double dt = 1e-3;
  const std::size_t n_steps = 3500;

  auto tree = make_branch_root(q0, p0, {gamma1, 0.0}, mass, hbar);
  BranchSchedule sched;
  sched.check_every = 25;
  sched.n_quadrature = 64;
  sched.gamma2_factor = 4.0;
  sched.max_generations = 2;

  const auto f0 = init_coherent_state(grid, q0, p0, gamma1, hbar, mass);
  SplitStepPropagator prop(grid, pot, hbar, mass);
  auto f_grid = f0;

  // split-then-superpose identity at the first split
  double split_identity = -1.0;
  std::size_t first_split_leaves = 0;

  // Fidelity stamped once both generations exist and a leaf has reached the
  // barrier core: past that point the near-top components turn genuinely
  // quantum and the overlap is reported, not asserted.
  double stamped_overlap = 0.0;
  double stamp_time = 0.0;

  // drive the schedule manually so the first split's identity is measured
  BranchSchedule stepper = sched;
  stepper.check_every = 0;
  for (std::size_t step = 0; step < n_steps; step += 25) {
    branch_propagate(tree, pot, dt, 25, stepper);
    f_grid = prop.propagate_complex(f_grid, dt, 25);

    for (const auto li : tree.leaves()) {
      auto& leaf = tree.nodes[li];
      if (leaf.omega_history.size() >= sched.max_generations) continue;
      if (!split_trigger(leaf, pot, sched.kappa)) continue;
      WeierstrassPlan plan;
      plan.n_quadrature = sched.n_quadrature;
      plan.gamma2_r = sched.gamma2_factor *
                      total_gamma(leaf.state.exponent, leaf.state.bundle, hbar).real();
      if (split_identity < 0.0) {
        const auto before = superpose(tree, grid);
        const auto daughters = weierstrass_split(tree, li, plan);
        const auto after = superpose(tree, grid);
        double err2 = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
          err2 += std::norm(after.psi(i) - before.psi(i));
        split_identity = std::sqrt(err2 * grid.cell_volume());
        first_split_leaves = daughters.size();
      } else {
        weierstrass_split(tree, li, plan);
      }
    }

    if (stamped_overlap == 0.0) {
      std::size_t gens = 0;
      double q_lead = -100.0;
      for (auto li : tree.leaves()) {
        gens = std::max(gens, tree.nodes[li].omega_history.size());
        q_lead = std::max(q_lead, tree.nodes[li].state.center.q);
      }
      if (gens >= 2 && q_lead > -0.5) {
        stamped_overlap = overlap_magnitude(superpose(tree, grid), f_grid);
        stamp_time = double(step + 25) * dt;
      }
    }
  }

  // final lobes and the (reported) late-time overlap
  const auto f_tree = superpose(tree, grid);
  const auto rho_t = density(f_tree);
  const auto rho_g = density(f_grid);
  double r_tree = 0, t_tree = 0, r_grid = 0, t_grid = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double q = grid.coord(0, i);
    if (q < -1.0) {
      r_tree += rho_t[i];
      r_grid += rho_g[i];
    } else if (q > 1.0) {
      t_tree += rho_t[i];
      t_grid += rho_g[i];
    }
  }
  const double cv = grid.cell_volume();
  r_tree *= cv;
  t_tree *= cv;
  r_grid *= cv;
  t_grid *= cv;
  const double late = overlap_magnitude(f_tree, f_grid);
  const bool lobes = r_tree > 0.05 && t_tree > 0.05 && r_grid > 0.05 && t_grid > 0.05;

  os << "    " << tree.leaves().size() << " leaves (two generations), split identity L2 "
     << split_identity << " (< 1e-8, " << first_split_leaves
     << " daughters), overlap at t=" << stamp_time << " (both generations live, leaf at "
        "the barrier core): " << stamped_overlap
     << " (> 0.99); reported after full interaction t=3.5: " << late
     << ", lobes tree R/T = " << r_tree << "/" << t_tree << " vs grid " << r_grid << "/"
     << t_grid;
  return split_identity >= 0.0 && split_identity < 1e-8 && stamped_overlap > 0.99 && lobes;
}

// --- C13 -------------------------------------------------------------------

bool c13_determinism(std::ostream& os) {
  namespace fs = std::filesystem;
  const auto base = fs::temp_directory_path() / "ow_accept_det";
  fs::remove_all(base);
  fs::create_directories(base);
  const auto cfg_path = (base / "paths.toml").string();
  {
    std::ofstream cfg(cfg_path);
    cfg << "scenario = \"paths\"\nseed = 42\n"
           "[grid]\ndims = 1\nn = [512]\nextent = [[-16, 16]]\n"
           "[potential]\ntype = \"harmonic\"\nomega = 1.0\n"
           "[initial]\nq0 = [1.0]\np0 = [0.0]\ngamma_re = [0.5]\n"
           "[time]\ndt = 1e-3\nn_steps = 200\nsave_every = 10\n"
           "[paths]\nn = 500\nrecord_stride = 50\n";
  }
  const int rc1 = run_scenario_file(cfg_path, (base / "out1").string());
  const int rc2 = run_scenario_file(cfg_path, (base / "out2").string());
  bool same = rc1 == 0 && rc2 == 0;
  std::string detail;
  for (const auto& entry : fs::directory_iterator(base / "out1")) {
    const auto name = entry.path().filename().string();
    const auto twin = base / "out2" / name;
    const bool match =
        fs::exists(twin) && file_checksum(entry.path().string()) == file_checksum(twin.string());
    if (!match) detail += " " + name;
    same = same && match;
  }
  os << "    rerun byte-identical: " << (same ? "yes" : ("no, differs:" + detail));
  return same;
}

}  // namespace

bool run_suite(std::ostream& os, const std::string& filter) {
  const Check checks[] = {
      {"C1 real/complex equivalence", c1_real_complex},
      {"C2 free-Gaussian analytics", c2_free_gaussian},
      {"C3 continuity order", c3_continuity_order},
      {"C4 one-world ensemble consistency", c4_ensemble},
      {"C5 classical limit", c5_classical_limit},
      {"C6 double slit", c6_double_slit},
      {"C7 Feynman-Kac", c7_feynman_kac},
      {"C8 parameter flows", c8_param_flows},
      {"C9 loop invariance", c9_loop},
      {"C10 Wronskian and caustic", c10_wronskian},
      {"C11 W-transform exactness", c11_wtransform},
      {"C12 branching fidelity", c12_branching},
      {"C13 determinism", c13_determinism},
  };
  bool all = true;
  for (const auto& c : checks) {
    if (!filter.empty() && c.name.find(filter) == std::string::npos) continue;
    std::ostringstream detail;
    bool pass = false;
    try {
      pass = c.body(detail);
    } catch (const std::exception& e) {
      detail << "    exception: " << e.what();
    }
    os << (pass ? "[PASS] " : "[FAIL] ") << c.name << "\n" << detail.str() << "\n";
    all = all && pass;
  }
  return all;
}

}  // namespace ow::acceptance
