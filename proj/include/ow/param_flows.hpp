#pragma once

#include <string>
#include <vector>

#include "ow/trial_family.hpp"

namespace ow {

// Energy flow: du/dt = d<H>/dv, dv/dt = -d<H>/du. Yoshida-composed leapfrog
// when <H> separates, implicit midpoint otherwise; both symplectic and
// time-reversible (negate dt to step back).
ParameterState hamilton_flow_step(const TrialFamily& fam, const ParameterState& s, double dt);

// Flux defect R = H_v . (j_u - v) - H_u . j_v, the S_W integrand with the
// Hamilton flow substituted; identically zero on dynamical pairs.
double flux_defect(const TrialFamily& fam, const ParameterState& s);

// Flux flow: explicit midpoint on the Hamiltonian field of K = <H> + R.
// Coincides with hamilton_flow_step wherever the pair condition holds and
// conserves K (the flux conservation residual) per step.
ParameterState flux_flow_step(const TrialFamily& fam, const ParameterState& s, double dt);

// Generator conserved by flux_flow_step.
double flux_flow_generator(const TrialFamily& fam, const ParameterState& s);

struct FlowRecord {
  double time = 0.0;
  std::vector<double> u, v;
  double energy = 0.0;
  double norm_rate = 0.0;  // flux defect R
  std::vector<double> det_pair;
};

struct FlowReport {
  std::vector<FlowRecord> rows;
  ParameterState final_state;
};

// Alternating composition: F(dt/2) then G(dt/2) per macro step, n steps.
FlowReport alternate_compose(const TrialFamily& fam, const ParameterState& s0, double dt,
                             std::size_t n);

// Per-pair 2x2 determinant of the gradient rows of <H> and the flux defect;
// zero where the Hamilton flow alone is flux-consistent (well-posed).
std::vector<double> wellposedness_determinant(const TrialFamily& fam, const ParameterState& s);

// Pair i is dynamical when |j_u_i - v_i| <= tol and |j_v_i| <= tol.
std::vector<bool> dynamical_pair_check(const TrialFamily& fam, const ParameterState& s,
                                       double tol);

// Transports every vertex of a closed loop (first == last) by
// alternate_compose over total time T and returns the reduced action
// (trapezoidal loop integral of v . du) before and after.
struct LoopAction {
  double before = 0.0;
  double after = 0.0;
  std::vector<ParameterState> transported;
};
LoopAction loop_action_invariant(const TrialFamily& fam,
                                 const std::vector<ParameterState>& loop, double dt, double T);

void write_flow_csv(const std::string& path, const FlowReport& report);
void write_loop_csv(const std::string& path, const std::vector<ParameterState>& loop);

}  // namespace ow
