#include "ow/adf.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "ow/errors.hpp"

namespace ow {

namespace {

double force(const Potential& v, double q) { return -v.grad({q, 0.0}, 1, 0); }

struct PhasePoint {
  double q, p;
};

void leapfrog(PhasePoint& x, const Potential& v, double mass, double dt) {
  const double ph = x.p + 0.5 * dt * force(v, x.q);
  x.q += dt * ph / mass;
  x.p = ph + 0.5 * dt * force(v, x.q);
}

}  // namespace

DeviationBundle make_parallel_bundle(const ClassicalCenter& c, double delta_q,
                                     double delta_p) {
  DeviationBundle b;
  b.mass = c.mass;
  b.delta_q = delta_q;
  b.delta_p = delta_p;
  b.qp_pos = c.q + delta_q;
  b.qm_pos = c.q - delta_q;
  b.pp_pos = b.pm_pos = c.p;
  b.qp_mom = b.qm_mom = c.q;
  b.pp_mom = c.p + delta_p;
  b.pm_mom = c.p - delta_p;
  return b;
}

DeviationBundle make_momentum_bundle(const ClassicalCenter& c, double delta_p) {
  DeviationBundle b = make_parallel_bundle(c, 1e-5, delta_p);
  // the sigma-defining pair itself carries the momentum offset
  b.qp_pos = b.qm_pos = c.q;
  b.pp_pos = c.p + delta_p;
  b.pm_pos = c.p - delta_p;
  return b;
}

GaussianExponent make_exponent(double c, double d, const DeviationBundle& b) {
  GaussianExponent e;
  e.c = e.c0 = c;
  e.d = e.d0 = d;
  e.sigma0 = b.sigma();
  if (e.sigma0 == 0.0)
    throw domain_error("make_exponent: bundle must have nonzero initial deviation");
  e.sigma_peak = std::abs(e.sigma0);
  e.last_sigma_sign = e.sigma0 > 0 ? 1 : -1;
  e.theta_w = std::atan2(d, c);  // w(0) = c0 + i d0
  return e;
}

ClassicalCenter hj_step(const ClassicalCenter& c, const Potential& v, double dt) {
  if (dt == 0.0) return c;
  ClassicalCenter out = c;
  const double ph = c.p + 0.5 * dt * force(v, c.q);
  out.q = c.q + dt * ph / c.mass;
  out.p = ph + 0.5 * dt * force(v, out.q);
  const double q_mid = 0.5 * (c.q + out.q);
  out.action = c.action + dt * (ph * ph / (2.0 * c.mass) - v.value1d(q_mid));
  out.time = c.time + dt;
  return out;
}

DeviationBundle deviation_step(const DeviationBundle& b, const Potential& v, double dt) {
  DeviationBundle out = b;
  PhasePoint pts[4] = {{b.qp_pos, b.pp_pos},
                       {b.qm_pos, b.pm_pos},
                       {b.qp_mom, b.pp_mom},
                       {b.qm_mom, b.pm_mom}};
  for (auto& x : pts) leapfrog(x, v, b.mass, dt);
  out.qp_pos = pts[0].q;
  out.pp_pos = pts[0].p;
  out.qm_pos = pts[1].q;
  out.pm_pos = pts[1].p;
  out.qp_mom = pts[2].q;
  out.pp_mom = pts[2].p;
  out.qm_mom = pts[3].q;
  out.pm_mom = pts[3].p;
  const double disp_pos = std::hypot(out.qp_pos - out.qm_pos, out.pp_pos - out.pm_pos);
  const double disp_mom = std::hypot(out.qp_mom - out.qm_mom, out.pp_mom - out.pm_mom);
  if (disp_pos < 1e-12 || disp_mom < 1e-12)
    throw domain_error("deviation_step: neighbor pair collapsed");
  return out;
}

namespace {

// Coupled right-hand side for (center, 4 neighbors, S, c, d).
struct AdfVec {
  double q, p, S;
  double n[8];  // qp_pos pp_pos qm_pos pm_pos qp_mom pp_mom qm_mom pm_mom
  double c, d;
};

AdfVec pack(const AdfState& s) {
  const auto& b = s.bundle;
  return {s.center.q,
          s.center.p,
          s.center.action,
          {b.qp_pos, b.pp_pos, b.qm_pos, b.pm_pos, b.qp_mom, b.pp_mom, b.qm_mom, b.pm_mom},
          s.exponent.c,
          s.exponent.d};
}

void unpack(const AdfVec& y, AdfState& s) {
  s.center.q = y.q;
  s.center.p = y.p;
  s.center.action = y.S;
  auto& b = s.bundle;
  b.qp_pos = y.n[0];
  b.pp_pos = y.n[1];
  b.qm_pos = y.n[2];
  b.pm_pos = y.n[3];
  b.qp_mom = y.n[4];
  b.pp_mom = y.n[5];
  b.qm_mom = y.n[6];
  b.pm_mom = y.n[7];
  s.exponent.c = y.c;
  s.exponent.d = y.d;
}

AdfVec rhs(const AdfVec& y, const Potential& v, double mass, double hbar) {
  AdfVec f{};
  f.q = y.p / mass;
  f.p = force(v, y.q);
  f.S = y.p * y.p / (2.0 * mass) - v.value1d(y.q);
  for (int k = 0; k < 4; ++k) {
    f.n[2 * k] = y.n[2 * k + 1] / mass;
    f.n[2 * k + 1] = force(v, y.n[2 * k]);
  }
  const double sigma = 0.5 * (y.n[0] - y.n[2]);
  const double sigma_dot = 0.5 * (y.n[1] - y.n[3]) / mass;
  const double r = (sigma != 0.0) ? sigma_dot / sigma : 0.0;
  f.c = 2.0 * r * y.c;
  f.d = 2.0 * r * y.d + 2.0 * hbar / mass;
  return f;
}

AdfVec axpy(const AdfVec& a, double h, const AdfVec& b) {
  AdfVec o = a;
  o.q += h * b.q;
  o.p += h * b.p;
  o.S += h * b.S;
  for (int k = 0; k < 8; ++k) o.n[k] += h * b.n[k];
  o.c += h * b.c;
  o.d += h * b.d;
  return o;
}

// w = J1 (c0 + i d0) + i (2 hbar/m) J2; nonzero through caustics.
std::complex<double> conjugate_w(const GaussianExponent& e, const DeviationBundle& b,
                                 double hbar) {
  const double j1 = b.sigma() / e.sigma0;
  const double j2 = b.j2();
  return {j1 * e.c0, j1 * e.d0 + 2.0 * hbar / b.mass * j2};
}

}  // namespace

AdfState adf_rk4_step(const AdfState& s, const Potential& v, double hbar, double dt) {
  const double mass = s.center.mass;
  const AdfVec y0 = pack(s);
  const AdfVec k1 = rhs(y0, v, mass, hbar);
  const AdfVec k2 = rhs(axpy(y0, 0.5 * dt, k1), v, mass, hbar);
  const AdfVec k3 = rhs(axpy(y0, 0.5 * dt, k2), v, mass, hbar);
  const AdfVec k4 = rhs(axpy(y0, dt, k3), v, mass, hbar);
  AdfVec y1 = y0;
  auto comb = [&](double a0, double a1, double a2, double a3, double a4) {
    return a0 + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
  };
  y1.q = comb(y0.q, k1.q, k2.q, k3.q, k4.q);
  y1.p = comb(y0.p, k1.p, k2.p, k3.p, k4.p);
  y1.S = comb(y0.S, k1.S, k2.S, k3.S, k4.S);
  for (int k = 0; k < 8; ++k) y1.n[k] = comb(y0.n[k], k1.n[k], k2.n[k], k3.n[k], k4.n[k]);
  y1.c = comb(y0.c, k1.c, k2.c, k3.c, k4.c);
  y1.d = comb(y0.d, k1.d, k2.d, k3.d, k4.d);

  AdfState out = s;
  unpack(y1, out);
  out.center.time = s.center.time + dt;

  auto& e = out.exponent;
  const double sigma = out.bundle.sigma();
  const double sigma_dot = out.bundle.sigma_dot();
  e.sigma_peak = std::max(e.sigma_peak, std::abs(sigma));

  // Caustic window: the quotient coefficient 2 sigma_dot/sigma cannot be
  // resolved by the step there; the closed two-solution form is exact.
  const double window = std::max(1e-6 * e.sigma_peak, 50.0 * std::abs(sigma_dot) * dt);
  if (std::abs(sigma) < window || std::abs(s.bundle.sigma()) < window) {
    const double j1 = sigma / e.sigma0;
    const double j2 = out.bundle.j2();
    e.c = e.c0 * j1 * j1;
    e.d = e.d0 * j1 * j1 + 2.0 * hbar / mass * j1 * j2;
  }

  // Unwrap the branch phase through w, which never passes through zero.
  const auto w_old = conjugate_w(s.exponent, s.bundle, hbar);
  const auto w_new = conjugate_w(e, out.bundle, hbar);
  const double cross = w_old.real() * w_new.imag() - w_old.imag() * w_new.real();
  const double dotp = w_old.real() * w_new.real() + w_old.imag() * w_new.imag();
  e.theta_w = s.exponent.theta_w + std::atan2(cross, dotp);

  const int sign = sigma >= 0.0 ? 1 : -1;
  if (sign != e.last_sigma_sign) {
    e.maslov += 1;
    e.last_sigma_sign = sign;
  }
  return out;
}

GaussianExponent exponent_step(const GaussianExponent& e, const DeviationBundle& b,
                               const Potential& v, double hbar, double dt) {
  AdfState s;
  s.center.mass = b.mass;
  s.center.q = 0.5 * (b.qp_mom + b.qm_mom);
  s.center.p = 0.5 * (b.pp_pos + b.pm_pos);
  s.bundle = b;
  s.exponent = e;
  return adf_rk4_step(s, v, hbar, dt).exponent;
}

double wronskian(const DeviationBundle& b, const GaussianExponent& e, double hbar,
                 bool* near_caustic) {
  const double sigma = b.sigma();
  if (near_caustic) *near_caustic = std::abs(sigma) < 1e-10 * e.sigma_peak;
  const double two_hbar_m = 2.0 * hbar / b.mass;
  if (std::abs(sigma) < 1e-10 * e.sigma_peak) return two_hbar_m;
  const double j1 = sigma / e.sigma0;
  // closed-route zeta = d_closed / sigma, regular through the caustic
  const double zeta_b = e.d0 * j1 / e.sigma0 + two_hbar_m * b.j2() / e.sigma0;
  const double zeta_a = e.d / sigma;
  return two_hbar_m + b.sigma_dot() * (zeta_b - zeta_a);
}

int maslov_update(const std::vector<double>& sigma_history, double rel_tol) {
  double peak = 0.0;
  for (double s : sigma_history) peak = std::max(peak, std::abs(s));
  const double tol = rel_tol * peak;
  int count = 0;
  int last_sign = 0;
  bool dipped = false;
  for (double s : sigma_history) {
    if (std::abs(s) <= tol) {
      dipped = true;
      continue;
    }
    const int sign = s > 0 ? 1 : -1;
    if (last_sign == 0) {
      last_sign = sign;
    } else if (sign != last_sign) {
      ++count;
      last_sign = sign;
    } else if (dipped) {
      throw domain_error("maslov_update: sigma grazed zero without a sign change");
    }
    dipped = false;
  }
  return count;
}

AdfTrajectory propagate_adf(const AdfState& s0, const Potential& v, double hbar, double dt,
                            std::size_t n_steps, std::size_t record_stride) {
  AdfTrajectory traj;
  AdfState s = s0;
  auto rec = [&](const AdfState& st) {
    traj.rows.push_back({st.center.time, st.center.q, st.center.p, st.center.action,
                         st.bundle.sigma(), st.exponent.c, st.exponent.d,
                         st.exponent.maslov, wronskian(st.bundle, st.exponent, hbar)});
  };
  rec(s);
  for (std::size_t k = 0; k < n_steps; ++k) {
    s = adf_rk4_step(s, v, hbar, dt);
    if ((k + 1) % record_stride == 0 || k + 1 == n_steps) rec(s);
  }
  traj.final_state = s;
  return traj;
}

std::complex<double> total_gamma(const GaussianExponent& e, const DeviationBundle& b,
                                 double hbar) {
  const std::complex<double> cd(e.c, e.d);
  const double sigma = b.sigma();
  if (std::abs(cd) == 0.0 || sigma == 0.0)
    throw domain_error("total_gamma: evaluated exactly at a caustic");
  return 1.0 / cd -
         std::complex<double>(0.0, b.mass * b.sigma_dot() / (2.0 * hbar * sigma));
}

std::complex<double> adf_prefactor(const GaussianExponent& e) {
  const double mod = std::hypot(e.c, e.d);
  const double mag =
      std::pow(2.0 / M_PI, 0.25) * std::pow(std::max(e.c, 0.0), 0.25) / std::sqrt(mod);
  // branch phase: arg(c+id) = arg(J1) + theta_w; |J1| cancels between c^{1/4}
  // and |c+id|^{-1/2}, and the sign flips of J1 are carried by theta_w's
  // smooth continuation, so -theta_w/2 is the whole phase.
  return mag * std::exp(std::complex<double>(0.0, -0.5 * e.theta_w));
}

SchrodingerField evaluate_adf(const ClassicalCenter& c, const GaussianExponent& e,
                              const DeviationBundle& b, const Grid& grid, double hbar) {
  if (grid.dims != 1) throw domain_error("evaluate_adf: 1D grids only");
  const auto gamma = total_gamma(e, b, hbar);

  SchrodingerField f;
  f.grid = grid;
  f.hbar = hbar;
  f.mass = c.mass;
  f.time = c.time;
  f.phi_r.resize(grid.size());
  f.phi_c.resize(grid.size());
  const auto g = adf_prefactor(e);
  for (std::size_t i = 0; i < grid.n[0]; ++i) {
    const double x = grid.coord(0, i) - c.q;
    const auto z =
        g * std::exp(-gamma * x * x +
                     std::complex<double>(0.0, (c.action + c.p * x) / hbar));
    f.phi_r[i] = z.real();
    f.phi_c[i] = z.imag();
  }
  const double edge = std::max(f.rho(0), f.rho(grid.n[0] - 1));
  double peak = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) peak = std::max(peak, f.rho(i));
  if (edge > 1e-10 * peak)
    throw domain_error("evaluate_adf: packet does not fit inside the grid");
  return f;
}

CausticCheck caustic_limit_check(const AdfTrajectory& traj, double hbar, double mass) {
  const auto& rows = traj.rows;
  CausticCheck out;
  out.d_slope_expected = -2.0 * hbar / mass;
  std::size_t zi = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i - 1].sigma * rows[i].sigma < 0.0) {
      zi = i;
      break;
    }
  }
  if (zi == 0) throw domain_error("caustic_limit_check: no sigma zero in the trajectory");
  const auto& a = rows[zi - 1];
  const auto& bb = rows[zi];
  const double frac = a.sigma / (a.sigma - bb.sigma);
  out.t_star = a.time + frac * (bb.time - a.time);
  const double sigma1 = (bb.sigma - a.sigma) / (bb.time - a.time);

  const double c0 = rows.front().c;
  const double sigma0 = rows.front().sigma;
  out.predicted =
      c0 / (sigma0 * sigma0) * sigma1 * sigma1 * mass * mass / (4.0 * hbar * hbar);

  const double window = 20.0 * (bb.time - a.time);
  for (const auto& r : rows) {
    if (std::abs(r.time - out.t_star) > window) continue;
    const double m2 = r.c * r.c + r.d * r.d;
    if (m2 > 0.0) out.peak = std::max(out.peak, r.c / m2);
  }
  out.d_slope = (bb.d - a.d) / (bb.time - a.time);
  return out;
}

void write_adf_csv(const std::string& path, const AdfTrajectory& t) {
  std::ofstream os(path);
  if (!os) throw config_error("write_adf_csv: cannot open " + path);
  os << "time,q_cl,p_cl,S_cl,sigma,c,d,maslov,wronskian\n" << std::setprecision(17);
  for (const auto& r : t.rows)
    os << r.time << ',' << r.q << ',' << r.p << ',' << r.action << ',' << r.sigma << ','
       << r.c << ',' << r.d << ',' << r.maslov << ',' << r.wronskian << '\n';
}

}  // namespace ow
