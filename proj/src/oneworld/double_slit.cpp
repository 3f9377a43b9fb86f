#include "ow/double_slit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "ow/errors.hpp"
#include "ow/interp.hpp"
#include "ow/observables.hpp"
#include "ow/propagator.hpp"
#include "ow/rng.hpp"

namespace ow {

namespace {

// Inverse-CDF sampler over a 2D grid density: cumulative marginal in x,
// cumulative conditionals per row, built once and shared by all paths.
class Rho2dSampler {
 public:
  Rho2dSampler(const Grid& g, const std::vector<double>& rho) : g_(g) {
    cum_x_.assign(g.n[0] + 1, 0.0);
    cum_y_.assign(g.size() + g.n[0], 0.0);
    for (std::size_t ix = 0; ix < g.n[0]; ++ix) {
      double row = 0.0;
      double* cy = &cum_y_[ix * (g.n[1] + 1)];
      cy[0] = 0.0;
      for (std::size_t iy = 0; iy < g.n[1]; ++iy) {
        row += std::max(0.0, rho[g.index(ix, iy)]);
        cy[iy + 1] = row;
      }
      cum_x_[ix + 1] = cum_x_[ix] + row;
    }
  }

  std::array<double, 2> sample(double u1, double u2) const {
    const double tx = u1 * cum_x_.back();
    const auto itx = std::upper_bound(cum_x_.begin(), cum_x_.end(), tx);
    std::size_t ix = itx == cum_x_.begin() ? 0 : std::size_t(itx - cum_x_.begin()) - 1;
    ix = std::min(ix, g_.n[0] - 1);
    const double wx = cum_x_[ix + 1] - cum_x_[ix];
    const double fx = wx > 0.0 ? (tx - cum_x_[ix]) / wx : 0.5;

    const double* cy = &cum_y_[ix * (g_.n[1] + 1)];
    const double ty = u2 * cy[g_.n[1]];
    const auto ity = std::upper_bound(cy, cy + g_.n[1] + 1, ty);
    std::size_t iy = ity == cy ? 0 : std::size_t(ity - cy) - 1;
    iy = std::min(iy, g_.n[1] - 1);
    const double wy = cy[iy + 1] - cy[iy];
    const double fy = wy > 0.0 ? (ty - cy[iy]) / wy : 0.5;
    return {g_.coord(0, ix) + fx * g_.spacing(0), g_.coord(1, iy) + fy * g_.spacing(1)};
  }

 private:
  Grid g_;
  std::vector<double> cum_x_;
  std::vector<double> cum_y_;  // (n[1]+1) entries per row
};

}  // namespace

DoubleSlitResult double_slit_run(const DoubleSlitConfig& cfg) {
  if (cfg.grid.dims != 2) throw config_error("double_slit_run: a 2D grid is required");
  const auto& g = cfg.grid;

  auto field = init_coherent_state(
      g, cfg.q0, cfg.p0,
      {std::complex<double>(cfg.gamma_r[0], 0.0), std::complex<double>(cfg.gamma_r[1], 0.0)},
      cfg.hbar, cfg.mass);
  SplitStepPropagator prop(g, cfg.potential, cfg.hbar, cfg.mass);
  if (cfg.absorb_fraction > 0.0) prop.set_absorbing_mask(cfg.absorb_fraction);

  DoubleSlitResult res;
  res.fringe.lo = g.lo[1];
  res.fringe.bin_width = g.length(1) / double(cfg.bins);
  res.fringe.count.assign(cfg.bins, 0.0);
  res.reference.assign(cfg.bins, 0.0);

  // Launch positions from rho(.,0).
  const auto rho0 = density(field);
  std::vector<std::array<double, 2>> xs(cfg.n_paths);
  std::vector<unsigned char> live(cfg.n_paths, 1);
  std::vector<double> spot(cfg.n_paths, 0.0);
  std::vector<unsigned char> hit(cfg.n_paths, 0);
  {
    const Rho2dSampler sampler(g, rho0);
    const long n = long(cfg.n_paths);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
      PathRng rng(cfg.seed, std::uint64_t(i));
      const auto u = rng.uniform2(std::uint64_t(1) << 63, 0);
      xs[i] = sampler.sample(u[0], u[1]);
    }
  }

  const std::size_t ix_detect = std::min(
      std::size_t(std::lround((cfg.detect_x - g.lo[0]) / g.spacing(0))), g.n[0] - 1);
  const double sigma_noise = std::sqrt(cfg.hbar / cfg.mass * cfg.dt);

  // Per-step transport drift v + u from the current snapshot (masked fields:
  // 4th-order centered stencils); u = (hbar/2m) grad rho / rho.
  std::array<std::vector<double>, 2> v;
  std::vector<unsigned char> vmask;
  auto refresh_velocity = [&]() {
    auto lv = local_velocity(field, /*spectral=*/false);
    const auto rho = density(field);
    const double d_const = cfg.hbar / (2.0 * cfg.mass);
    for (int a = 0; a < 2; ++a) {
      const auto drho = gradient_fd4(g, rho, a);
      for (std::size_t i = 0; i < g.size(); ++i)
        if (!lv.masked[i]) lv.comp[a][i] += d_const * drho[i] / rho[i];
    }
    v[0] = std::move(lv.comp[0]);
    v[1] = std::move(lv.comp[1]);
    vmask = std::move(lv.masked);
  };

  for (std::size_t step = 0; step < cfg.n_steps; ++step) {
    refresh_velocity();

    const long n = long(cfg.n_paths);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
      if (!live[i]) continue;
      PathRng rng(cfg.seed, std::uint64_t(i));
      const auto z = rng.normal2(step, 1);
      std::array<double, 2> x = xs[i];
      std::array<double, 2> vx{0.0, 0.0};
      if (!interp::cell_masked(g, vmask, x)) {
        vx[0] = interp::cubic(g, v[0], x);
        vx[1] = interp::cubic(g, v[1], x);
      }
      std::array<double, 2> xn{x[0] + vx[0] * cfg.dt + sigma_noise * z[0],
                               x[1] + vx[1] * cfg.dt + sigma_noise * z[1]};
      if (x[0] < cfg.detect_x && xn[0] >= cfg.detect_x) {
        // first crossing of the detection line, linear between the brackets
        const double f = (cfg.detect_x - x[0]) / (xn[0] - x[0]);
        spot[i] = x[1] + f * (xn[1] - x[1]);
        hit[i] = 1;
        live[i] = 0;
      } else if (!interp::inside(g, xn)) {
        live[i] = 0;
      } else {
        xs[i] = xn;
      }
    }

    field = prop.propagate_complex(field, cfg.dt, 1);

    // Time-integrated reference profile along the detection line.
    for (std::size_t iy = 0; iy < g.n[1]; ++iy) {
      const double y = g.coord(1, iy);
      const auto b = std::min(std::size_t((y - res.fringe.lo) / res.fringe.bin_width),
                              cfg.bins - 1);
      res.reference[b] += field.rho(g.index(ix_detect, iy)) * cfg.dt * g.spacing(1);
    }

    if (cfg.save_every > 0 && (step + 1) % cfg.save_every == 0)
      res.snapshots.push_back(field);
  }

  for (std::size_t i = 0; i < cfg.n_paths; ++i) {
    if (!hit[i]) continue;
    ++res.n_detected;
    res.spot_y.push_back(spot[i]);
    res.spot_id.push_back(i);
    if (spot[i] >= res.fringe.lo && spot[i] < g.hi[1]) {
      const auto b = std::min(std::size_t((spot[i] - res.fringe.lo) / res.fringe.bin_width),
                              cfg.bins - 1);
      res.fringe.count[b] += 1.0;
    }
  }
  return res;
}

void write_spots_csv(const std::string& path, const DoubleSlitResult& r) {
  std::ofstream os(path);
  if (!os) throw config_error("write_spots_csv: cannot open " + path);
  os << "stream_id,y_detect\n" << std::setprecision(17);
  for (std::size_t i = 0; i < r.spot_y.size(); ++i)
    os << r.spot_id[i] << ',' << r.spot_y[i] << '\n';
}

void write_fringe_csv(const std::string& path, const DoubleSlitResult& r) {
  std::ofstream os(path);
  if (!os) throw config_error("write_fringe_csv: cannot open " + path);
  os << "bin_center,count,reference_density\n" << std::setprecision(17);
  for (std::size_t b = 0; b < r.fringe.count.size(); ++b)
    os << r.fringe.center(b) << ',' << r.fringe.count[b] << ',' << r.reference[b] << '\n';
}

}  // namespace ow
