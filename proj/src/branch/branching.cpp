#include "ow/branching.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "ow/errors.hpp"

namespace ow {

namespace {

// The leaf's wavefunction piece: amplitude * g(t) exp(-gamma_tot x^2 +
// (i/hbar)(S + p x)), x = q - q_cl.
struct LeafWave {
  std::complex<double> coeff;  // amplitude * g * exp(i S / hbar)
  std::complex<double> gamma;  // total curvature
  double q, p;
};

LeafWave leaf_wave(const BranchNode& n, double hbar) {
  LeafWave w;
  w.gamma = total_gamma(n.state.exponent, n.state.bundle, hbar);
  w.q = n.state.center.q;
  w.p = n.state.center.p;
  w.coeff = n.amplitude * adf_prefactor(n.state.exponent) *
            std::exp(std::complex<double>(0.0, n.state.center.action / hbar));
  return w;
}

// integral of conj(w_a-form) * (w_b-form) over q, closed form.
std::complex<double> pair_overlap(const LeafWave& a, const LeafWave& b, double hbar) {
  const std::complex<double> A = std::conj(a.gamma) + b.gamma;
  const std::complex<double> B =
      2.0 * std::conj(a.gamma) * a.q + 2.0 * b.gamma * b.q +
      std::complex<double>(0.0, (b.p - a.p) / hbar);
  const std::complex<double> C =
      -std::conj(a.gamma) * a.q * a.q - b.gamma * b.q * b.q +
      std::complex<double>(0.0, (a.p * a.q - b.p * b.q) / hbar);
  return std::conj(a.coeff) * b.coeff * std::sqrt(M_PI / A) * std::exp(B * B / (4.0 * A) + C);
}

}  // namespace

std::vector<std::size_t> BranchTree::leaves() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].leaf) out.push_back(i);
  return out;
}

BranchTree make_branch_root(double q0, double p0, std::complex<double> gamma1, double mass,
                            double hbar) {
  if (gamma1.real() <= 0.0)
    throw domain_error("make_branch_root: Re(gamma1) must be positive");
  BranchTree tree;
  tree.hbar = hbar;
  BranchNode root;
  root.id = 0;
  root.parent = -1;
  root.leaf = true;
  root.state.center = {q0, p0, 0.0, mass, 0.0};
  root.state.bundle = make_parallel_bundle(root.state.center);
  // 1/gamma = c + i d
  const auto inv = 1.0 / gamma1;
  root.state.exponent = make_exponent(inv.real(), inv.imag(), root.state.bundle);
  root.amplitude = 1.0;
  tree.nodes.push_back(root);
  return tree;
}

std::vector<std::size_t> weierstrass_split(BranchTree& tree, std::size_t node_index,
                                           const WeierstrassPlan& plan) {
  // copy: push_back below reallocates the node vector
  const BranchNode mother = tree.nodes[node_index];
  if (!mother.leaf) throw domain_error("weierstrass_split: node is not a leaf");
  const double hbar = tree.hbar;
  const auto gamma1 = total_gamma(mother.state.exponent, mother.state.bundle, hbar);
  const double g1r = gamma1.real();
  const double g1c = gamma1.imag();
  if (plan.gamma2_r <= g1r)
    throw domain_error("weierstrass_split: gamma2_r must exceed the mother's gamma1_r");
  const double A = 1.0 / (1.0 / g1r - 1.0 / plan.gamma2_r);

  const auto rule = gauss_hermite(plan.n_quadrature);
  const double t = mother.state.center.time;
  const double q0 = mother.state.center.q;
  const double p0 = mother.state.center.p;
  const std::complex<double> gamma2(plan.gamma2_r, g1c);
  const auto inv2 = 1.0 / gamma2;
  const double prefactor = std::sqrt((A + plan.gamma2_r) / M_PI);
  const auto g_mother = adf_prefactor(mother.state.exponent);

  // Far quadrature nodes carry weights ~exp(-x_k^2); daughters below the
  // relative floor are dropped at birth into the truncation budget.
  double amp_peak = 0.0;
  std::vector<std::complex<double>> amps(plan.n_quadrature);
  for (std::size_t k = 0; k < plan.n_quadrature; ++k) {
    const double wq = rule.w[k] / std::sqrt(A);
    amps[k] = mother.amplitude * prefactor * wq;
    amp_peak = std::max(amp_peak, std::abs(amps[k]));
  }

  std::vector<std::size_t> daughters;
  for (std::size_t k = 0; k < plan.n_quadrature; ++k) {
    if (std::abs(amps[k]) < 1e-12 * amp_peak) {
      tree.truncation_budget += std::abs(amps[k]);
      continue;
    }
    const double omega = rule.x[k] / std::sqrt(A);
    BranchNode d;
    d.id = int(tree.nodes.size());
    d.parent = int(node_index);
    d.t_split = t;
    d.omega = omega;
    d.omega_history = mother.omega_history;
    d.omega_history.emplace_back(t, omega);
    d.parent_p = p0;
    d.gamma1c = g1c;

    d.state.center = mother.state.center;
    d.state.center.q = q0 + omega;
    d.state.center.p = p0 - 2.0 * hbar * g1c * omega;
    d.state.bundle = make_parallel_bundle(d.state.center, mother.state.bundle.delta_q,
                                          mother.state.bundle.delta_p);
    d.state.exponent = make_exponent(inv2.real(), inv2.imag(), d.state.bundle);
    d.leaf = true;

    // quadrature weight for the weighted integral (e^{-A Omega^2} absorbed)
    const double wq = rule.w[k] / std::sqrt(A);
    const std::complex<double> phase =
        std::exp(std::complex<double>(0.0, p0 * omega / hbar - g1c * omega * omega));
    d.amplitude = mother.amplitude * g_mother / adf_prefactor(d.state.exponent) * prefactor *
                  wq * phase;
    daughters.push_back(tree.nodes.size());
    tree.nodes.push_back(std::move(d));
  }
  tree.nodes[node_index].leaf = false;
  return daughters;
}

Reconstruction reconstruct(const BranchTree& tree, const std::vector<std::size_t>& daughters,
                           std::size_t mother_index, const Grid& grid) {
  Reconstruction rec;
  rec.field.grid = grid;
  rec.field.hbar = tree.hbar;
  rec.field.mass = tree.nodes[mother_index].state.center.mass;
  rec.field.time = tree.nodes[mother_index].state.center.time;
  rec.field.phi_r.assign(grid.size(), 0.0);
  rec.field.phi_c.assign(grid.size(), 0.0);

  for (auto di : daughters) {
    const auto w = leaf_wave(tree.nodes[di], tree.hbar);
    const long n = long(grid.n[0]);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
      const double x = grid.coord(0, std::size_t(i)) - w.q;
      const auto z =
          w.coeff * std::exp(-w.gamma * x * x +
                             std::complex<double>(0.0, w.p * x / tree.hbar));
      rec.field.phi_r[i] += z.real();
      rec.field.phi_c[i] += z.imag();
    }
  }
  const auto mw = leaf_wave(tree.nodes[mother_index], tree.hbar);
  double err2 = 0.0;
  for (std::size_t i = 0; i < grid.n[0]; ++i) {
    const double x = grid.coord(0, i) - mw.q;
    const auto z = mw.coeff * std::exp(-mw.gamma * x * x +
                                       std::complex<double>(0.0, mw.p * x / tree.hbar));
    const double dr = rec.field.phi_r[i] - z.real();
    const double dc = rec.field.phi_c[i] - z.imag();
    err2 += dr * dr + dc * dc;
  }
  rec.l2_error = std::sqrt(err2 * grid.cell_volume());
  return rec;
}

bool split_trigger(const BranchNode& leaf, const Potential& v, double kappa) {
  const double q = leaf.state.center.q;
  const double v2 = v.second(q);
  const double v4 = v.fourth(q);
  const double width = std::sqrt(std::max(leaf.state.exponent.c, 0.0));
  // The curvature energy across the packet must be a noticeable fraction of
  // the leaf's energy before the anharmonicity test makes sense; quadratic
  // and flat regions never split.
  const double energy = 0.5 * leaf.state.center.p * leaf.state.center.p /
                            leaf.state.center.mass +
                        std::abs(v.value1d(q)) + 1e-12;
  if (std::abs(v2) * width * width < 1e-4 * energy) return false;
  if (std::abs(v4) < 1e-300) return false;
  const double length_scale = std::sqrt(std::abs(v2 / v4));
  return length_scale < kappa * width;
}

double superposition_norm(const BranchTree& tree) {
  const auto ls = tree.leaves();
  std::vector<LeafWave> waves;
  waves.reserve(ls.size());
  for (auto i : ls) waves.push_back(leaf_wave(tree.nodes[i], tree.hbar));
  // row sums are independent; combining them in index order keeps the result
  // independent of the thread count
  std::vector<double> row(waves.size(), 0.0);
  const long n = long(waves.size());
#pragma omp parallel for schedule(static)
  for (long a = 0; a < n; ++a) {
    std::complex<double> acc = 0.0;
    for (long b = 0; b < n; ++b) acc += pair_overlap(waves[a], waves[b], tree.hbar);
    row[a] = acc.real();
  }
  double n2 = 0.0;
  for (double r : row) n2 += r;
  return std::sqrt(std::max(0.0, n2));
}

void branch_propagate(BranchTree& tree, const Potential& v, double dt, std::size_t n_steps,
                      const BranchSchedule& schedule) {
  for (std::size_t step = 0; step < n_steps; ++step) {
    auto ls = tree.leaves();
    const long n = long(ls.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
      auto& node = tree.nodes[ls[i]];
      node.state = adf_rk4_step(node.state, v, tree.hbar, dt);
    }

    if (schedule.check_every == 0 || (step + 1) % schedule.check_every != 0) continue;

    ls = tree.leaves();
    bool any_split = false;
    double norm_before = 0.0;
    for (auto li : ls) {
      auto& node = tree.nodes[li];
      if (node.omega_history.size() >= schedule.max_generations) continue;
      if (!split_trigger(node, v, schedule.kappa)) continue;
      if (!any_split) norm_before = superposition_norm(tree);
      any_split = true;
      WeierstrassPlan plan;
      plan.n_quadrature = schedule.n_quadrature;
      plan.gamma2_r =
          schedule.gamma2_factor *
          total_gamma(node.state.exponent, node.state.bundle, tree.hbar).real();
      weierstrass_split(tree, li, plan);
    }
    if (any_split)
      tree.truncation_budget += std::abs(superposition_norm(tree) - norm_before);

    // prune smallest-amplitude leaves beyond the cap
    ls = tree.leaves();
    if (ls.size() > tree.leaf_cap) {
      if (tree.leaf_cap < schedule.n_quadrature)
        throw resource_error("branch_propagate: leaf cap below one split's quadrature order");
      std::sort(ls.begin(), ls.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(tree.nodes[a].amplitude) < std::abs(tree.nodes[b].amplitude);
      });
      const std::size_t n_prune = ls.size() - tree.leaf_cap;
      for (std::size_t k = 0; k < n_prune; ++k) {
        tree.nodes[ls[k]].leaf = false;
        tree.truncation_budget += std::abs(tree.nodes[ls[k]].amplitude);
      }
    }
  }
}

SchrodingerField superpose(const BranchTree& tree, const Grid& grid) {
  SchrodingerField f;
  f.grid = grid;
  f.hbar = tree.hbar;
  f.phi_r.assign(grid.size(), 0.0);
  f.phi_c.assign(grid.size(), 0.0);
  const auto ls = tree.leaves();
  if (!ls.empty()) {
    f.mass = tree.nodes[ls.front()].state.center.mass;
    f.time = tree.nodes[ls.front()].state.center.time;
  }
  for (auto li : ls) {
    const auto w = leaf_wave(tree.nodes[li], tree.hbar);
    // escape check per leaf: warn-by-flagging is handled by callers; here we
    // simply add the tails that fit.
    const long n = long(grid.n[0]);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
      const double x = grid.coord(0, std::size_t(i)) - w.q;
      const auto z = w.coeff * std::exp(-w.gamma * x * x +
                                        std::complex<double>(0.0, w.p * x / tree.hbar));
      f.phi_r[i] += z.real();
      f.phi_c[i] += z.imag();
    }
  }
  return f;
}

void write_tree_jsonl(const std::string& path, const BranchTree& tree) {
  std::ofstream os(path);
  if (!os) throw config_error("write_tree_jsonl: cannot open " + path);
  os << std::setprecision(17);
  for (const auto& n : tree.nodes) {
    os << "{\"id\":" << n.id << ",\"parent\":" << n.parent << ",\"t_split\":" << n.t_split
       << ",\"omega\":" << n.omega << ",\"q\":" << n.state.center.q
       << ",\"p\":" << n.state.center.p << ",\"c\":" << n.state.exponent.c
       << ",\"d\":" << n.state.exponent.d << ",\"amp_re\":" << n.amplitude.real()
       << ",\"amp_im\":" << n.amplitude.imag() << "}\n";
  }
}

}  // namespace ow
