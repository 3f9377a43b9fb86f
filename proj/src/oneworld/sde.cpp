#include "ow/sde.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "ow/errors.hpp"
#include "ow/interp.hpp"
#include "ow/observables.hpp"
#include "ow/stats.hpp"

namespace ow {

namespace {

using interp::cell_masked;
using interp::inside;

inline double interp_cubic(const Grid& g, const std::vector<double>& f,
                           const std::array<double, 2>& x) {
  return interp::cubic(g, f, x);
}

}  // namespace

FieldSequence FieldSequence::record(SplitStepPropagator& prop, const SchrodingerField& f0,
                                    double dt, std::size_t n_steps, std::size_t save_every) {
  if (save_every == 0) throw domain_error("FieldSequence: save_every must be positive");
  FieldSequence seq;
  seq.grid_ = f0.grid;
  seq.t0_ = f0.time;
  seq.snapshot_dt_ = dt * double(save_every);
  seq.hbar_ = f0.hbar;
  seq.mass_ = f0.mass;

  auto push = [&](const SchrodingerField& f) {
    auto v = local_velocity(f);
    // osmotic drift u = (hbar/2m) grad rho / rho on unmasked cells
    const auto rho = density(f);
    const double d_const = f.hbar / (2.0 * f.mass);
    std::array<std::vector<double>, 2> osm;
    for (int a = 0; a < f.grid.dims; ++a) {
      const auto drho = gradient_spectral(f.grid, rho, a);
      osm[a].assign(f.grid.size(), 0.0);
      for (std::size_t i = 0; i < f.grid.size(); ++i)
        if (!v.masked[i]) osm[a][i] = d_const * drho[i] / rho[i];
    }
    seq.v_.push_back({std::move(v.comp[0]), std::move(v.comp[1])});
    seq.osm_.push_back(std::move(osm));
    seq.vmask_.push_back(std::move(v.masked));
    seq.rho_.push_back(rho);
  };

  push(f0);
  SchrodingerField f = f0;
  std::size_t done = 0;
  while (done < n_steps) {
    const std::size_t chunk = std::min(save_every, n_steps - done);
    f = prop.propagate_complex(f, dt, chunk);
    done += chunk;
    push(f);
  }
  seq.n_snapshots_ = seq.v_.size();
  return seq;
}

std::array<double, 2> FieldSequence::interp_field(
    const std::vector<std::array<std::vector<double>, 2>>& f, const std::array<double, 2>& x,
    double t, bool* masked) const {
  if (t < t_begin() - 1e-12 || t > t_end() + 1e-12)
    throw domain_error("FieldSequence: time outside the recorded span");
  const double s = std::clamp((t - t0_) / snapshot_dt_, 0.0, double(n_snapshots_ - 1));
  const std::size_t i0 = (n_snapshots_ <= 1) ? 0 : std::min(std::size_t(s), n_snapshots_ - 2);
  const auto i1 = std::min(i0 + 1, n_snapshots_ - 1);
  const double w = (n_snapshots_ == 1) ? 0.0 : s - double(i0);

  bool m = cell_masked(grid_, vmask_[i0], x) || cell_masked(grid_, vmask_[i1], x);
  if (masked) *masked = m;
  if (m) return {0.0, 0.0};

  std::array<double, 2> out{0.0, 0.0};
  for (int a = 0; a < grid_.dims; ++a) {
    const double v0 = interp_cubic(grid_, f[i0][a], x);
    const double v1 = interp_cubic(grid_, f[i1][a], x);
    out[a] = (1.0 - w) * v0 + w * v1;
  }
  return out;
}

std::array<double, 2> FieldSequence::drift(const std::array<double, 2>& x, double t,
                                           bool* masked) const {
  return interp_field(v_, x, t, masked);
}

std::array<double, 2> FieldSequence::transport_drift(const std::array<double, 2>& x, double t,
                                                     bool* masked) const {
  bool m = false;
  const auto v = interp_field(v_, x, t, &m);
  if (masked) *masked = m;
  if (m) return {0.0, 0.0};
  const auto u = interp_field(osm_, x, t, nullptr);
  return {v[0] + u[0], v[1] + u[1]};
}

double FieldSequence::rho(const std::array<double, 2>& x, double t) const {
  const double s = std::clamp((t - t0_) / snapshot_dt_, 0.0, double(n_snapshots_ - 1));
  const std::size_t i0 = (n_snapshots_ <= 1) ? 0 : std::min(std::size_t(s), n_snapshots_ - 2);
  const auto i1 = std::min(i0 + 1, n_snapshots_ - 1);
  const double w = (n_snapshots_ == 1) ? 0.0 : s - double(i0);
  const double r0 = interp_cubic(grid_, rho_[i0], x);
  const double r1 = interp_cubic(grid_, rho_[i1], x);
  return std::max(0.0, (1.0 - w) * r0 + w * r1);
}

std::array<double, 2> imaginary_drift(const SchrodingerField& f,
                                      const std::array<double, 2>& x) {
  const double D = f.hbar / (2.0 * f.mass);
  const auto rho = density(f);
  const double floor = rho_floor(f);
  const double r = interp_cubic(f.grid, rho, x);
  std::array<double, 2> out{0.0, 0.0};
  if (r < floor) return out;
  for (int a = 0; a < f.grid.dims; ++a) {
    const auto dr = gradient_spectral(f.grid, rho, a);
    out[a] = -D * interp_cubic(f.grid, dr, x) / r;
  }
  return out;
}

void step_path(PathState& s, const FieldSequence& seq, double dt, const PathRng& rng,
               std::uint64_t step_index, double noise_scale) {
  if (s.exited) return;
  bool masked = false;
  const auto v = seq.transport_drift(s.x, s.t, &masked);
  if (masked) ++s.masked_steps;
  const double sigma = noise_scale * std::sqrt(seq.hbar() / seq.mass() * dt);
  const auto z = rng.normal2(step_index, 0);
  for (int a = 0; a < seq.grid().dims; ++a) s.x[a] += v[a] * dt + sigma * z[a];
  s.t += dt;
  if (!inside(seq.grid(), s.x)) s.exited = true;
}

OneWorldPath integrate_quantum_hamilton(double x0, const FieldSequence& seq,
                                        const Potential& pot, double dt, std::size_t n,
                                        std::uint64_t seed, std::uint64_t stream_id,
                                        double noise_scale) {
  OneWorldPath path;
  path.stream_id = stream_id;
  PathRng rng(seed, stream_id);
  PathState s;
  s.x = {x0, 0.0};
  s.t = seq.t_begin();

  // Initial momentum record: [psi^T p psi]_{X0} = m rho v.
  bool masked = false;
  const auto v0 = seq.drift(s.x, s.t, &masked);
  double p = seq.mass() * seq.rho(s.x, s.t) * v0[0];

  path.times.push_back(s.t);
  path.x.push_back(s.x);
  path.p.push_back(p);
  for (std::size_t k = 0; k < n && !s.exited; ++k) {
    const double rho = seq.rho(s.x, s.t);
    p += -rho * pot.grad({s.x[0], s.x[1]}, seq.grid().dims, 0) * dt;
    step_path(s, seq, dt, rng, k, noise_scale);
    path.times.push_back(s.t);
    path.x.push_back(s.x);
    path.p.push_back(p);
  }
  path.masked_steps = s.masked_steps;
  path.exited = s.exited;
  return path;
}

OneWorldPath classical_limit_trajectory(double q0, double p0, const Potential& pot,
                                        double mass, double dt, std::size_t n) {
  OneWorldPath path;
  double q = q0, p = p0;
  path.times.push_back(0.0);
  path.x.push_back({q, 0.0});
  path.p.push_back(p);
  // velocity-Verlet
  double f = -pot.grad({q, 0.0}, 1, 0);
  for (std::size_t k = 0; k < n; ++k) {
    const double ph = p + 0.5 * dt * f;
    q += dt * ph / mass;
    f = -pot.grad({q, 0.0}, 1, 0);
    p = ph + 0.5 * dt * f;
    path.times.push_back(double(k + 1) * dt);
    path.x.push_back({q, 0.0});
    path.p.push_back(p);
  }
  return path;
}

Ensemble sample_ensemble(const FieldSequence& seq, const EnsembleOptions& opt) {
  if (seq.grid().dims != 1)
    throw domain_error("sample_ensemble: inverse-CDF sampler is one-dimensional");
  Ensemble out;
  out.paths.resize(opt.n_paths);
  out.endpoints_x.assign(opt.n_paths, 0.0);
  const GridCdf cdf(seq.rho0(), seq.grid().lo[0], seq.grid().spacing(0));

  const long n = long(opt.n_paths);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const auto stream = std::uint64_t(i);
    PathRng rng(opt.seed, stream);
    PathState s;
    // step index 2^63 reserved for the initial draw
    s.x = {cdf.quantile(rng.uniform2(std::uint64_t(1) << 63, 0)[0]), 0.0};
    s.t = seq.t_begin();

    OneWorldPath& rec = out.paths[i];
    rec.stream_id = stream;
    if (opt.record_stride > 0) {
      rec.times.push_back(s.t);
      rec.x.push_back(s.x);
    }
    for (std::size_t k = 0; k < opt.n_steps && !s.exited; ++k) {
      step_path(s, seq, opt.dt, rng, k, opt.noise_scale);
      if (opt.record_stride > 0 && ((k + 1) % opt.record_stride == 0 || k + 1 == opt.n_steps)) {
        rec.times.push_back(s.t);
        rec.x.push_back(s.x);
      }
    }
    rec.masked_steps = s.masked_steps;
    rec.exited = s.exited;
    out.endpoints_x[i] = s.x[0];
  }
  return out;
}

void write_ensemble_csv(const std::string& path, const Ensemble& e, int dims) {
  std::ofstream os(path);
  if (!os) throw config_error("write_ensemble_csv: cannot open " + path);
  os << (dims == 1 ? "stream_id,time,x,flag\n" : "stream_id,time,x,y,flag\n");
  os << std::setprecision(17);
  for (const auto& p : e.paths) {
    for (std::size_t k = 0; k < p.times.size(); ++k) {
      os << p.stream_id << ',' << p.times[k] << ',' << p.x[k][0];
      if (dims == 2) os << ',' << p.x[k][1];
      os << ',' << (p.exited && k + 1 == p.times.size() ? 1 : 0) << '\n';
    }
  }
}

}  // namespace ow
