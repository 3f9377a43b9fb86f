#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ow/field.hpp"
#include "ow/potential.hpp"

namespace ow {

// Classical carrier of the Hamilton-Jacobi phase: center (q, p) and the
// accumulated action S along it.
struct ClassicalCenter {
  double q = 0.0;
  double p = 0.0;
  double action = 0.0;
  double mass = 1.0;
  double time = 0.0;
};

// Reference center plus finite-offset neighbor trajectories: a parallel
// (position-seeded) pair defining the deviation sigma, and a momentum-seeded
// pair supplying the conjugate Jacobi solution used through caustics.
struct DeviationBundle {
  // position-seeded pair: q +/- delta_q, same momentum
  double qp_pos = 0, pp_pos = 0, qm_pos = 0, pm_pos = 0;
  // momentum-seeded pair: same position, p +/- delta_p
  double qp_mom = 0, pp_mom = 0, qm_mom = 0, pm_mom = 0;
  double delta_q = 1e-5, delta_p = 1e-5;
  double mass = 1.0;

  // signed deviation (wedge of the displacement of the parallel pair)
  double sigma() const { return 0.5 * (qp_pos - qm_pos); }
  double sigma_dot() const { return 0.5 * (pp_pos - pm_pos) / mass; }
  // conjugate Jacobi solution: J2(0) = 0, J2dot(0) = 1
  double j2() const { return 0.5 * mass * (qp_mom - qm_mom) / delta_p; }
  double j2_dot() const { return 0.5 * (pp_mom - pm_mom) / delta_p; }
};

DeviationBundle make_parallel_bundle(const ClassicalCenter& c, double delta_q = 1e-5,
                                     double delta_p = 1e-5);
// Neighbors offset in momentum only (sigma(0) = 0, grows like t for V = 0).
DeviationBundle make_momentum_bundle(const ClassicalCenter& c, double delta_p = 1e-5);

// Complex Gaussian exponent 1/(c + i d) plus its caustic bookkeeping.
// theta_w is the continuously unwrapped argument of the conjugate combination
//   w(t) = J1 (c0 + i d0) + i (2 hbar/m) J2,
// which never vanishes and carries the Maslov phase of the prefactor
// (c + i d = J1 w, so the J1 sign flips are exactly the caustic passages).
struct GaussianExponent {
  double c = 1.0;
  double d = 0.0;
  int maslov = 0;
  double theta_w = 0.0;
  double sigma0 = 1.0, c0 = 1.0, d0 = 0.0;
  double sigma_peak = 1.0;  // running max |sigma|, scales caustic tolerances
  int last_sigma_sign = 1;
};

GaussianExponent make_exponent(double c, double d, const DeviationBundle& b);

// Leapfrog update of (q, p); action by midpoint Lagrangian quadrature.
ClassicalCenter hj_step(const ClassicalCenter& c, const Potential& v, double dt);

// Leapfrog update of all neighbors. Throws when a pair's phase-space
// displacement collapses below 1e-12.
DeviationBundle deviation_step(const DeviationBundle& b, const Potential& v, double dt);

// RK4 on cdot = 2 (sigma_dot/sigma) c, ddot = 2 (sigma_dot/sigma) d + 2 hbar/m,
// co-advancing a copy of the bundle. Near a caustic the quotient coefficient
// is unresolvable at the step size, so inside
// |sigma| < max(1e-6 sigma_peak, 50 |sigma_dot| dt) the closed two-solution
// form c = c0 J1^2, d = d0 J1^2 + (2hbar/m) J1 J2 (exact for the same ODEs)
// takes over.
GaussianExponent exponent_step(const GaussianExponent& e, const DeviationBundle& b,
                               const Potential& v, double hbar, double dt);

// sigma zeta_dot - sigma_dot zeta with zeta = d/sigma, evaluated as the
// consistency of the RK4 (c,d) route against the closed Jacobi-pair route;
// equals 2 hbar/m when the two agree. Sets *near_caustic when
// |sigma| < 1e-10 sigma_peak.
double wronskian(const DeviationBundle& b, const GaussianExponent& e, double hbar,
                 bool* near_caustic = nullptr);

// Counts sign changes of a sampled sigma history; throws on a grazing zero
// (a dip under tol that returns with the same sign).
int maslov_update(const std::vector<double>& sigma_history, double rel_tol = 1e-10);

// The full coupled state advanced by one RK4 step (center, bundle and
// exponent integrated together so all series are O(dt^4) consistent).
struct AdfState {
  ClassicalCenter center;
  DeviationBundle bundle;
  GaussianExponent exponent;
};
AdfState adf_rk4_step(const AdfState& s, const Potential& v, double hbar, double dt);

struct AdfRecord {
  double time, q, p, action, sigma, c, d;
  int maslov;
  double wronskian;
};

struct AdfTrajectory {
  std::vector<AdfRecord> rows;
  AdfState final_state;
};
AdfTrajectory propagate_adf(const AdfState& s0, const Potential& v, double hbar, double dt,
                            std::size_t n_steps, std::size_t record_stride = 1);

// psi = g(t) exp[-(q-q_cl)^2/(c+id)] exp[(i/hbar)(S + p x + (m sigma_dot /
// 2 sigma) x^2)], x = q - q_cl: the Gaussian ADF on top of the local
// Hamilton-Jacobi phase through second order. g carries the Maslov branch via
// theta_w. Normalized; throws if the packet does not fit the grid.
SchrodingerField evaluate_adf(const ClassicalCenter& c, const GaussianExponent& e,
                              const DeviationBundle& b, const Grid& grid, double hbar);

// Total complex curvature -d(log psi)/dx^2 piece: gamma_total =
// 1/(c+id) - i m sigma_dot / (2 hbar sigma); what a Weierstrass split sees.
std::complex<double> total_gamma(const GaussianExponent& e, const DeviationBundle& b,
                                 double hbar);

// Complex prefactor g(t) including the Maslov branch.
std::complex<double> adf_prefactor(const GaussianExponent& e);

// Peak of Re[1/(c+id)] through a sigma zero, its predicted finite limit
// (c0/sigma0^2) sigma1^2 (m/2hbar)^2, and the fitted d-slope there.
struct CausticCheck {
  double t_star = 0.0;
  double peak = 0.0;
  double predicted = 0.0;
  double d_slope = 0.0;           // fitted near t*
  double d_slope_expected = 0.0;  // -2 hbar / m
};
CausticCheck caustic_limit_check(const AdfTrajectory& traj, double hbar, double mass);

void write_adf_csv(const std::string& path, const AdfTrajectory& t);

}  // namespace ow
