#include "ow/propagator.hpp"

#include <cmath>

#include "ow/errors.hpp"
#include "ow/kernels.hpp"

namespace ow {

SplitStepPropagator::SplitStepPropagator(const Grid& grid, const Potential& potential,
                                         double hbar, double mass)
    : grid_(grid), potential_(potential), hbar_(hbar), mass_(mass), fft_(grid) {
  v_table_ = potential_.tabulate(grid_);
  zpsi_.resize(grid_.size());
  zr_.resize(grid_.size());
  zc_.resize(grid_.size());
}

void SplitStepPropagator::check_step(const SchrodingerField& f, double dt) const {
  if (dt <= 0.0) throw instability_error("propagate: dt must be positive");
  if (!f.grid.same_as(grid_)) throw domain_error("propagate: field grid mismatch");
  double min_dx2 = grid_.spacing(0) * grid_.spacing(0);
  if (grid_.dims == 2) min_dx2 = std::min(min_dx2, grid_.spacing(1) * grid_.spacing(1));
  if (f.hbar * dt / (f.mass * min_dx2) >= 10.0)
    throw instability_error("propagate: hbar*dt/(m*dx^2) exceeds the sanity bound 10");
}

void SplitStepPropagator::build_kinetic_angles(double dt) {
  if (dt == cached_dt_ && !kin_half_.empty()) return;
  cached_dt_ = dt;
  kin_half_.assign(grid_.size(), 0.0);
  pot_angle_.assign(grid_.size(), 0.0);
  const double kfac = hbar_ * dt / (4.0 * mass_);  // (hbar k^2 / 2m) * (dt/2) / hbar
  if (grid_.dims == 1) {
    for (std::size_t i = 0; i < grid_.n[0]; ++i) {
      const double k = grid_.wavenumber(0, i);
      kin_half_[i] = kfac * k * k;
    }
  } else {
    for (std::size_t ix = 0; ix < grid_.n[0]; ++ix) {
      const double kx = grid_.wavenumber(0, ix);
      for (std::size_t iy = 0; iy < grid_.n[1]; ++iy) {
        const double ky = grid_.wavenumber(1, iy);
        kin_half_[grid_.index(ix, iy)] = kfac * (kx * kx + ky * ky);
      }
    }
  }
  for (std::size_t i = 0; i < grid_.size(); ++i) pot_angle_[i] = v_table_[i] * dt / hbar_;
}

void SplitStepPropagator::set_absorbing_mask(double fraction, double strength) {
  mask_.assign(grid_.size(), 1.0);
  auto ramp = [&](int axis, std::size_t i) {
    const double L = grid_.length(axis);
    const double w = fraction * L;
    const double q = grid_.coord(axis, i);
    const double d = std::min(q - grid_.lo[axis], grid_.hi[axis] - q);
    if (d >= w) return 1.0;
    const double c = std::cos(0.5 * M_PI * (1.0 - d / w));
    return 1.0 - strength * (1.0 - c * c);
  };
  if (grid_.dims == 1) {
    for (std::size_t i = 0; i < grid_.n[0]; ++i) mask_[i] = ramp(0, i);
  } else {
    for (std::size_t ix = 0; ix < grid_.n[0]; ++ix)
      for (std::size_t iy = 0; iy < grid_.n[1]; ++iy)
        mask_[grid_.index(ix, iy)] = ramp(0, ix) * ramp(1, iy);
  }
}

void SplitStepPropagator::apply_mask(std::vector<double>& phi_r,
                                     std::vector<double>& phi_c) const {
  if (mask_.empty()) return;
  const long n = long(mask_.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    phi_r[i] *= mask_[i];
    phi_c[i] *= mask_[i];
  }
}

SchrodingerField SplitStepPropagator::propagate_complex(const SchrodingerField& f, double dt,
                                                        std::size_t n_steps) {
  check_step(f, dt);
  build_kinetic_angles(dt);
  SchrodingerField out = f;
  const std::size_t n = grid_.size();
  for (std::size_t i = 0; i < n; ++i) zpsi_[i] = {out.phi_r[i], out.phi_c[i]};

  double norm_before = out.norm();
  for (std::size_t s = 0; s < n_steps; ++s) {
    fft_.forward(zpsi_.data());
    kernels::phase_multiply(zpsi_, kin_half_);
    fft_.backward(zpsi_.data());
    kernels::phase_multiply(zpsi_, pot_angle_);
    fft_.forward(zpsi_.data());
    kernels::phase_multiply(zpsi_, kin_half_);
    fft_.backward(zpsi_.data());

    if (mask_.empty()) {
      // Unitary stepping: guard against blow-up once per step.
      double sq = 0.0;
      for (std::size_t i = 0; i < n; ++i) sq += std::norm(zpsi_[i]);
      const double norm_now = sq * grid_.cell_volume();
      if (std::abs(norm_now - norm_before) > 1e-8 * std::max(1.0, norm_before))
        throw instability_error("propagate_complex: norm drift per step exceeded 1e-8");
      norm_before = norm_now;
    } else {
      const long nn = long(n);
#pragma omp parallel for schedule(static)
      for (long i = 0; i < nn; ++i) zpsi_[i] *= mask_[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.phi_r[i] = zpsi_[i].real();
    out.phi_c[i] = zpsi_[i].imag();
  }
  out.time = f.time + double(n_steps) * dt;
  return out;
}

SchrodingerField SplitStepPropagator::propagate_real_vector(const SchrodingerField& f,
                                                            double dt, std::size_t n_steps) {
  check_step(f, dt);
  build_kinetic_angles(dt);
  SchrodingerField out = f;
  const std::size_t n = grid_.size();

  // Half kinetic step as a J-rotation of the spectral coefficient pair
  // (phi_r_hat, phi_c_hat); the rotation has real coefficients so both
  // components stay real after the inverse transform.
  auto kinetic_half = [&]() {
    for (std::size_t i = 0; i < n; ++i) zr_[i] = out.phi_r[i];
    for (std::size_t i = 0; i < n; ++i) zc_[i] = out.phi_c[i];
    fft_.forward(zr_.data());
    fft_.forward(zc_.data());
    const long nn = long(n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < nn; ++i) {
      const double ca = std::cos(kin_half_[i]), sa = std::sin(kin_half_[i]);
      const auto r = zr_[i], c = zc_[i];
      zr_[i] = ca * r + sa * c;
      zc_[i] = -sa * r + ca * c;
    }
    fft_.backward(zr_.data());
    fft_.backward(zc_.data());
    for (std::size_t i = 0; i < n; ++i) out.phi_r[i] = zr_[i].real();
    for (std::size_t i = 0; i < n; ++i) out.phi_c[i] = zc_[i].real();
  };

  double norm_before = out.norm();
  for (std::size_t s = 0; s < n_steps; ++s) {
    kinetic_half();
    kernels::rotate_pair(out.phi_r, out.phi_c, pot_angle_);
    kinetic_half();
    if (mask_.empty()) {
      const double norm_now = out.norm();
      if (std::abs(norm_now - norm_before) > 1e-8 * std::max(1.0, norm_before))
        throw instability_error("propagate_real_vector: norm drift per step exceeded 1e-8");
      norm_before = norm_now;
    } else {
      apply_mask(out.phi_r, out.phi_c);
    }
  }
  out.time = f.time + double(n_steps) * dt;
  return out;
}

}  // namespace ow
