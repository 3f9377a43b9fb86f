#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "ow/field.hpp"
#include "ow/potential.hpp"
#include "ow/propagator.hpp"
#include "ow/rng.hpp"

namespace ow {

// One stochastic path: a single launch event. Times are strictly increasing;
// a path that leaves the domain is truncated with the exit recorded.
struct OneWorldPath {
  std::uint64_t stream_id = 0;
  std::vector<double> times;
  std::vector<std::array<double, 2>> x;
  std::vector<double> p;  // momentum record P_{X_t} (quantum Hamilton runs)
  std::size_t masked_steps = 0;
  bool exited = false;
};

// Uniformly spaced snapshots of the drift field v = j/rho (plus rho), the
// time-dependent input to path stepping. Immutable once recorded; safe to
// share across path workers.
class FieldSequence {
 public:
  static FieldSequence record(SplitStepPropagator& prop, const SchrodingerField& f0,
                              double dt, std::size_t n_steps, std::size_t save_every);

  const Grid& grid() const { return grid_; }
  double t_begin() const { return t0_; }
  double t_end() const { return t0_ + snapshot_dt_ * double(n_snapshots_ - 1); }
  double hbar() const { return hbar_; }
  double mass() const { return mass_; }
  const std::vector<double>& rho0() const { return rho_[0]; }

  // Bohm velocity v = j/rho at (x, t): cubic in space, linear in time.
  // Masked regions give a zero vector and set *masked. Throws outside the
  // recorded span.
  std::array<double, 2> drift(const std::array<double, 2>& x, double t,
                              bool* masked = nullptr) const;
  // Forward transport drift v + u with the osmotic u = (hbar/2m) grad rho /
  // rho, the combination whose path density follows rho (Nagasawa form).
  std::array<double, 2> transport_drift(const std::array<double, 2>& x, double t,
                                        bool* masked = nullptr) const;
  // rho interpolated at (x, t) (cubic/linear, clamped at zero).
  double rho(const std::array<double, 2>& x, double t) const;

 private:
  Grid grid_;
  double t0_ = 0.0, snapshot_dt_ = 0.0, hbar_ = 1.0, mass_ = 1.0;
  std::size_t n_snapshots_ = 0;
  std::array<double, 2> interp_field(const std::vector<std::array<std::vector<double>, 2>>& f,
                                     const std::array<double, 2>& x, double t,
                                     bool* masked) const;
  std::vector<std::array<std::vector<double>, 2>> v_;    // per snapshot, per axis
  std::vector<std::array<std::vector<double>, 2>> osm_;  // osmotic drift u
  std::vector<std::vector<unsigned char>> vmask_;
  std::vector<std::vector<double>> rho_;
};

// alpha_imag = -(D/rho) grad rho at x; diagnostic only, never drives paths.
std::array<double, 2> imaginary_drift(const SchrodingerField& f,
                                      const std::array<double, 2>& x);

struct PathState {
  std::array<double, 2> x{0.0, 0.0};
  double t = 0.0;
  std::size_t masked_steps = 0;
  bool exited = false;
};

// One Euler-Maruyama update: x += (v + u) dt + sqrt(hbar/m) N(0, dt), the
// transport drift plus the Wiener term. noise_scale multiplies the noise
// (0 disables it).
void step_path(PathState& s, const FieldSequence& seq, double dt, const PathRng& rng,
               std::uint64_t step_index, double noise_scale = 1.0);

// Quantum canonical pair: X by step_path, P from the local-density-weighted
// force dP = -[grad V]_X dt. The P record never feeds back into X.
OneWorldPath integrate_quantum_hamilton(double x0, const FieldSequence& seq,
                                        const Potential& pot, double dt, std::size_t n,
                                        std::uint64_t seed, std::uint64_t stream_id,
                                        double noise_scale = 1.0);

// Classical limit: leapfrog on dq/dt = p/m, dp/dt = -grad V; no noise.
OneWorldPath classical_limit_trajectory(double q0, double p0, const Potential& pot,
                                        double mass, double dt, std::size_t n);

struct EnsembleOptions {
  std::uint64_t seed = 0;
  std::size_t n_paths = 0;
  double dt = 1e-3;
  std::size_t n_steps = 0;
  std::size_t record_stride = 0;  // 0: endpoints only
  double noise_scale = 1.0;
};

struct Ensemble {
  std::vector<OneWorldPath> paths;    // recorded at the stride (may be endpoint-only)
  std::vector<double> endpoints_x;    // first coordinate at final time
};

// Independent paths with X0 drawn from rho(.,0) by inverse CDF (1D sequences).
Ensemble sample_ensemble(const FieldSequence& seq, const EnsembleOptions& opt);

void write_ensemble_csv(const std::string& path, const Ensemble& e, int dims);

}  // namespace ow
