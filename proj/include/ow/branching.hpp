#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "ow/adf.hpp"
#include "ow/field.hpp"
#include "ow/gauss_hermite.hpp"
#include "ow/potential.hpp"

namespace ow {

// Weierstrass split target: daughters share the real exponent gamma2_r
// (> mother's), quadrature order n_quadrature; A = 1/(1/g1r - 1/g2r).
struct WeierstrassPlan {
  double gamma2_r = 0.0;
  std::size_t n_quadrature = 16;
};

struct BranchNode {
  int id = 0;
  int parent = -1;
  double t_split = 0.0;  // time this node was created
  double omega = 0.0;    // its displacement at the split
  std::vector<std::pair<double, double>> omega_history;  // (t_j, Omega_j)
  AdfState state;
  std::complex<double> amplitude{1.0, 0.0};
  // stored split bookkeeping, kept verbatim for the momentum-shift audit
  double parent_p = 0.0, gamma1c = 0.0;
  bool leaf = false;
};

struct BranchTree {
  std::vector<BranchNode> nodes;
  double hbar = 1.0;
  double truncation_budget = 0.0;  // accumulated quadrature/prune deficit
  std::size_t leaf_cap = 100000;

  std::vector<std::size_t> leaves() const;
};

// A tree with a single root leaf built from the mother Gaussian
// exp(-gamma1 (q-q0)^2 + i p0 (q-q0)/hbar), normalized.
BranchTree make_branch_root(double q0, double p0, std::complex<double> gamma1, double mass,
                            double hbar);

// Splits one leaf into plan.n_quadrature daughters at the node's current
// time: q_Omega = q + Omega_k, p_Omega = p - 2 hbar gamma^c Omega_k,
// gamma2 = gamma2_r + i gamma^c; amplitudes carry the quadrature weights and
// the phase exp(i p Omega/hbar - i gamma^c Omega^2). Throws invalid-plan if
// gamma2_r <= gamma1_r.
std::vector<std::size_t> weierstrass_split(BranchTree& tree, std::size_t node_index,
                                           const WeierstrassPlan& plan);

// Coherent sum of the given daughters on a grid plus the L2 distance to the
// mother node they came from.
struct Reconstruction {
  SchrodingerField field;
  double l2_error = 0.0;
};
Reconstruction reconstruct(const BranchTree& tree, const std::vector<std::size_t>& daughters,
                           std::size_t mother_index, const Grid& grid);

// true when the potential's variation length sqrt(|V''|/|V''''|) at the leaf
// center is shorter than kappa times the leaf width sqrt(c).
bool split_trigger(const BranchNode& leaf, const Potential& v, double kappa = 1.0);

struct BranchSchedule {
  std::size_t check_every = 50;   // trigger test cadence in steps
  double kappa = 1.0;             // trigger scale factor
  double gamma2_factor = 8.0;     // gamma2_r = factor * gamma1_r at each split
  std::size_t n_quadrature = 16;
  std::size_t max_generations = 2;
};

// Advances every leaf by ADF stepping; at trigger times, leaves satisfying
// split_trigger are split. Leaves are pruned smallest-|amplitude| first when
// the cap is passed, the pruned mass joining the truncation budget.
void branch_propagate(BranchTree& tree, const Potential& v, double dt, std::size_t n_steps,
                      const BranchSchedule& schedule);

// Amplitude-weighted coherent sum of all leaves on the grid.
SchrodingerField superpose(const BranchTree& tree, const Grid& grid);

// Analytic norm of the current leaf superposition (pairwise complex
// Gaussian overlaps), used for the norm audit without a grid.
double superposition_norm(const BranchTree& tree);

// Line-oriented JSON dump, one node per line.
void write_tree_jsonl(const std::string& path, const BranchTree& tree);

}  // namespace ow
