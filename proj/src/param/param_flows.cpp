#include "ow/param_flows.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "ow/errors.hpp"

namespace ow {

namespace {

// One leapfrog substep for separable <H> (kick-drift-kick).
ParameterState leapfrog(const TrialFamily& fam, ParameterState s, double dt) {
  auto gu = fam.denergy_du(s);
  for (std::size_t k = 0; k < s.v.size(); ++k) s.v[k] -= 0.5 * dt * gu[k];
  const auto gv = fam.denergy_dv(s);
  for (std::size_t k = 0; k < s.u.size(); ++k) s.u[k] += dt * gv[k];
  gu = fam.denergy_du(s);
  for (std::size_t k = 0; k < s.v.size(); ++k) s.v[k] -= 0.5 * dt * gu[k];
  s.time += dt;
  return s;
}

ParameterState implicit_midpoint(const TrialFamily& fam, const ParameterState& s, double dt) {
  ParameterState mid = s;
  for (int iter = 0; iter < 64; ++iter) {
    const auto gu = fam.denergy_du(mid);
    const auto gv = fam.denergy_dv(mid);
    double delta = 0.0;
    ParameterState next = mid;
    for (std::size_t k = 0; k < s.u.size(); ++k) {
      const double mu = s.u[k] + 0.5 * dt * gv[k];
      const double mv = s.v[k] - 0.5 * dt * gu[k];
      delta = std::max({delta, std::abs(mu - mid.u[k]), std::abs(mv - mid.v[k])});
      next.u[k] = mu;
      next.v[k] = mv;
    }
    mid = next;
    if (delta < 1e-15) break;
  }
  ParameterState out = s;
  for (std::size_t k = 0; k < s.u.size(); ++k) {
    out.u[k] = 2.0 * mid.u[k] - s.u[k];
    out.v[k] = 2.0 * mid.v[k] - s.v[k];
  }
  out.time = s.time + dt;
  return out;
}

}  // namespace

ParameterState hamilton_flow_step(const TrialFamily& fam, const ParameterState& s, double dt) {
  if (dt == 0.0) return s;
  if (!fam.separable_energy()) return implicit_midpoint(fam, s, dt);
  // Yoshida 4th-order composition of leapfrog substeps.
  const double cbrt2 = std::cbrt(2.0);
  const double w1 = 1.0 / (2.0 - cbrt2);
  const double w0 = -cbrt2 / (2.0 - cbrt2);
  auto out = leapfrog(fam, s, w1 * dt);
  out = leapfrog(fam, out, w0 * dt);
  out = leapfrog(fam, out, w1 * dt);
  out.time = s.time + dt;
  return out;
}

double flux_defect(const TrialFamily& fam, const ParameterState& s) {
  const auto hv = fam.denergy_dv(s);
  const auto hu = fam.denergy_du(s);
  const auto ju = fam.pair_flux_u(s);
  const auto jv = fam.pair_flux_v(s);
  double r = 0.0;
  for (std::size_t k = 0; k < s.u.size(); ++k)
    r += hv[k] * (ju[k] - s.v[k]) - hu[k] * jv[k];
  return r;
}

double flux_flow_generator(const TrialFamily& fam, const ParameterState& s) {
  return fam.energy(s) + flux_defect(fam, s);
}

namespace {

// Gradient of the flux-flow generator by central differences; the defect is
// assembled from analytic pieces, so 1e-6 steps keep ~1e-10 accuracy.
void generator_gradient(const TrialFamily& fam, const ParameterState& s,
                        std::vector<double>& gu, std::vector<double>& gv) {
  const double h = 1e-6;
  gu.assign(s.u.size(), 0.0);
  gv.assign(s.v.size(), 0.0);
  for (std::size_t k = 0; k < s.u.size(); ++k) {
    ParameterState sp = s, sm = s;
    sp.u[k] += h;
    sm.u[k] -= h;
    gu[k] = (flux_flow_generator(fam, sp) - flux_flow_generator(fam, sm)) / (2.0 * h);
    sp = s;
    sm = s;
    sp.v[k] += h;
    sm.v[k] -= h;
    gv[k] = (flux_flow_generator(fam, sp) - flux_flow_generator(fam, sm)) / (2.0 * h);
  }
}

}  // namespace

namespace {

void check_gradient_regular(const TrialFamily& fam, const ParameterState& s,
                            const std::vector<double>& gu, const std::vector<double>& gv) {
  const double scale = std::max(1.0, std::abs(fam.energy(s)));
  for (std::size_t k = 0; k < gu.size(); ++k)
    if (!std::isfinite(gu[k]) || !std::isfinite(gv[k]) || std::abs(gu[k]) > 1e12 * scale ||
        std::abs(gv[k]) > 1e12 * scale)
      throw domain_error("flux_flow_step: singular parameter geometry (condition > 1e12)");
}

}  // namespace

ParameterState flux_flow_step(const TrialFamily& fam, const ParameterState& s, double dt) {
  if (dt == 0.0) return s;
  // Dynamical-pair reduction: when the flux defect vanishes identically
  // around s, the S_W principle imposes nothing and the energy flow is the
  // flux flow (zero correction), so delegate to it exactly.
  {
    const double scale = std::max(1.0, std::abs(fam.energy(s)));
    double defect = std::abs(flux_defect(fam, s));
    const double h = 1e-4;
    for (std::size_t k = 0; k < s.u.size() && defect < 1e-11 * scale; ++k) {
      ParameterState sp = s;
      sp.u[k] += h;
      defect = std::max(defect, std::abs(flux_defect(fam, sp)));
      sp = s;
      sp.v[k] += h;
      defect = std::max(defect, std::abs(flux_defect(fam, sp)));
    }
    if (defect < 1e-11 * scale) return hamilton_flow_step(fam, s, dt);
  }
  std::vector<double> gu, gv;
  generator_gradient(fam, s, gu, gv);
  check_gradient_regular(fam, s, gu, gv);
  ParameterState mid = s;
  for (std::size_t k = 0; k < s.u.size(); ++k) {
    mid.u[k] += 0.5 * dt * gv[k];
    mid.v[k] -= 0.5 * dt * gu[k];
  }
  generator_gradient(fam, mid, gu, gv);
  ParameterState out = s;
  for (std::size_t k = 0; k < s.u.size(); ++k) {
    out.u[k] += dt * gv[k];
    out.v[k] -= dt * gu[k];
  }
  out.time = s.time + dt;
  return out;
}

FlowReport alternate_compose(const TrialFamily& fam, const ParameterState& s0, double dt,
                             std::size_t n) {
  FlowReport rep;
  ParameterState s = s0;
  auto log_row = [&](const ParameterState& st) {
    FlowRecord r;
    r.time = st.time;
    r.u = st.u;
    r.v = st.v;
    r.energy = fam.energy(st);
    r.norm_rate = flux_defect(fam, st);
    r.det_pair = wellposedness_determinant(fam, st);
    rep.rows.push_back(std::move(r));
  };
  log_row(s);
  // Palindromic pairing: odd macro steps apply F then G, even ones G then F,
  // which keeps the composition defect second order in dt.
  for (std::size_t k = 0; k < n; ++k) {
    if (k % 2 == 0) {
      s = hamilton_flow_step(fam, s, 0.5 * dt);
      s = flux_flow_step(fam, s, 0.5 * dt);
    } else {
      s = flux_flow_step(fam, s, 0.5 * dt);
      s = hamilton_flow_step(fam, s, 0.5 * dt);
    }
    log_row(s);
  }
  rep.final_state = s;
  return rep;
}

std::vector<double> wellposedness_determinant(const TrialFamily& fam,
                                              const ParameterState& s) {
  const double h = 1e-6;
  const std::size_t np = s.u.size();
  std::vector<double> det(np, 0.0);
  const auto hu = fam.denergy_du(s);
  const auto hv = fam.denergy_dv(s);
  for (std::size_t k = 0; k < np; ++k) {
    ParameterState sp = s, sm = s;
    sp.u[k] += h;
    sm.u[k] -= h;
    const double ru = (flux_defect(fam, sp) - flux_defect(fam, sm)) / (2.0 * h);
    sp = s;
    sm = s;
    sp.v[k] += h;
    sm.v[k] -= h;
    const double rv = (flux_defect(fam, sp) - flux_defect(fam, sm)) / (2.0 * h);
    det[k] = hu[k] * rv - hv[k] * ru;
  }
  return det;
}

std::vector<bool> dynamical_pair_check(const TrialFamily& fam, const ParameterState& s,
                                       double tol) {
  const auto ju = fam.pair_flux_u(s);
  const auto jv = fam.pair_flux_v(s);
  std::vector<bool> ok(s.u.size());
  for (std::size_t k = 0; k < s.u.size(); ++k)
    ok[k] = std::abs(ju[k] - s.v[k]) <= tol && std::abs(jv[k]) <= tol;
  return ok;
}

namespace {

double loop_integral(const std::vector<ParameterState>& loop) {
  // trapezoid of v . du around the polygon
  double a = 0.0;
  for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
    for (std::size_t k = 0; k < loop[i].u.size(); ++k)
      a += 0.5 * (loop[i].v[k] + loop[i + 1].v[k]) * (loop[i + 1].u[k] - loop[i].u[k]);
  }
  return a;
}

}  // namespace

LoopAction loop_action_invariant(const TrialFamily& fam,
                                 const std::vector<ParameterState>& loop, double dt,
                                 double T) {
  if (loop.size() < 2 || loop.front().u != loop.back().u || loop.front().v != loop.back().v)
    throw domain_error("loop_action_invariant: loop must be closed (first == last)");
  LoopAction out;
  out.before = loop_integral(loop);
  out.transported.resize(loop.size());
  const auto n_steps = std::size_t(std::llround(T / dt));
  const long n = long(loop.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    ParameterState s = loop[i];
    for (std::size_t k = 0; k < n_steps; ++k) {
      if (k % 2 == 0) {
        s = hamilton_flow_step(fam, s, 0.5 * dt);
        s = flux_flow_step(fam, s, 0.5 * dt);
      } else {
        s = flux_flow_step(fam, s, 0.5 * dt);
        s = hamilton_flow_step(fam, s, 0.5 * dt);
      }
    }
    out.transported[i] = std::move(s);
  }
  out.after = loop_integral(out.transported);
  return out;
}

void write_flow_csv(const std::string& path, const FlowReport& report) {
  std::ofstream os(path);
  if (!os) throw config_error("write_flow_csv: cannot open " + path);
  if (report.rows.empty()) return;
  const std::size_t np = report.rows.front().u.size();
  os << "time";
  for (std::size_t k = 0; k < np; ++k) os << ",u" << k;
  for (std::size_t k = 0; k < np; ++k) os << ",v" << k;
  os << ",energy,norm_rate";
  for (std::size_t k = 0; k < np; ++k) os << ",det_pair_" << k;
  os << '\n' << std::setprecision(17);
  for (const auto& r : report.rows) {
    os << r.time;
    for (double u : r.u) os << ',' << u;
    for (double v : r.v) os << ',' << v;
    os << ',' << r.energy << ',' << r.norm_rate;
    for (double d : r.det_pair) os << ',' << d;
    os << '\n';
  }
}

void write_loop_csv(const std::string& path, const std::vector<ParameterState>& loop) {
  std::ofstream os(path);
  if (!os) throw config_error("write_loop_csv: cannot open " + path);
  if (loop.empty()) return;
  const std::size_t np = loop.front().u.size();
  os << "vertex_id";
  for (std::size_t k = 0; k < np; ++k) os << ",u" << k;
  for (std::size_t k = 0; k < np; ++k) os << ",v" << k;
  os << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < loop.size(); ++i) {
    os << i;
    for (double u : loop[i].u) os << ',' << u;
    for (double v : loop[i].v) os << ',' << v;
    os << '\n';
  }
}

}  // namespace ow
