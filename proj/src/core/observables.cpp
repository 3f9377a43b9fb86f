#include "ow/observables.hpp"

#include <cmath>
#include <complex>

#include "ow/errors.hpp"
#include "ow/fft.hpp"
#include "ow/kernels.hpp"
#include "ow/propagator.hpp"

namespace ow {

namespace {

// d/dq along an axis of a complex array via the spectral multiplier ik.
void gradient_spectral_complex(const Grid& g, std::vector<std::complex<double>>& z, int axis) {
  SpectralTransform fft(g);
  fft.forward(z.data());
  if (g.dims == 1) {
    for (std::size_t i = 0; i < g.n[0]; ++i)
      z[i] *= std::complex<double>(0.0, g.wavenumber(0, i));
  } else {
    for (std::size_t ix = 0; ix < g.n[0]; ++ix)
      for (std::size_t iy = 0; iy < g.n[1]; ++iy) {
        const double k = (axis == 0) ? g.wavenumber(0, ix) : g.wavenumber(1, iy);
        z[g.index(ix, iy)] *= std::complex<double>(0.0, k);
      }
  }
  fft.backward(z.data());
}

}  // namespace

std::vector<double> gradient_spectral(const Grid& g, const std::vector<double>& fvals,
                                      int axis) {
  std::vector<std::complex<double>> z(fvals.begin(), fvals.end());
  gradient_spectral_complex(g, z, axis);
  std::vector<double> out(fvals.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = z[i].real();
  return out;
}

std::vector<double> gradient_fd4(const Grid& g, const std::vector<double>& f, int axis) {
  std::vector<double> out(f.size());
  const double inv12h = 1.0 / (12.0 * g.spacing(axis));
  auto wrap = [](long i, long n) { return std::size_t(((i % n) + n) % n); };
  if (g.dims == 1) {
    const long n = long(g.n[0]);
    const long nn = n;
#pragma omp parallel for schedule(static)
    for (long i = 0; i < nn; ++i) {
      out[i] = (-f[wrap(i + 2, n)] + 8.0 * f[wrap(i + 1, n)] - 8.0 * f[wrap(i - 1, n)] +
                f[wrap(i - 2, n)]) *
               inv12h;
    }
  } else {
    const long nx = long(g.n[0]), ny = long(g.n[1]);
#pragma omp parallel for schedule(static)
    for (long ix = 0; ix < nx; ++ix) {
      for (long iy = 0; iy < ny; ++iy) {
        auto at = [&](long jx, long jy) { return f[g.index(wrap(jx, nx), wrap(jy, ny))]; };
        if (axis == 0)
          out[g.index(ix, iy)] = (-at(ix + 2, iy) + 8.0 * at(ix + 1, iy) -
                                  8.0 * at(ix - 1, iy) + at(ix - 2, iy)) *
                                 inv12h;
        else
          out[g.index(ix, iy)] = (-at(ix, iy + 2) + 8.0 * at(ix, iy + 1) -
                                  8.0 * at(ix, iy - 1) + at(ix, iy - 2)) *
                                 inv12h;
      }
    }
  }
  return out;
}

double rho_floor(const SchrodingerField& f) {
  double peak = 0.0;
  for (std::size_t i = 0; i < f.grid.size(); ++i) peak = std::max(peak, f.rho(i));
  return 1e-12 * peak;
}

std::vector<double> density(const SchrodingerField& f) {
  std::vector<double> rho(f.grid.size());
  const long n = long(rho.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) rho[i] = f.rho(i);
  return rho;
}

VectorField flux(const SchrodingerField& f, bool spectral) {
  VectorField j;
  const double fac = f.hbar / f.mass;
  for (int a = 0; a < f.grid.dims; ++a) {
    const auto dr = spectral ? gradient_spectral(f.grid, f.phi_r, a)
                             : gradient_fd4(f.grid, f.phi_r, a);
    const auto dc = spectral ? gradient_spectral(f.grid, f.phi_c, a)
                             : gradient_fd4(f.grid, f.phi_c, a);
    auto& out = j.comp[a];
    out.resize(f.grid.size());
    const long n = long(out.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[i] = fac * (f.phi_r[i] * dc[i] - f.phi_c[i] * dr[i]);
  }
  return j;
}

VectorField local_velocity(const SchrodingerField& f, bool spectral) {
  VectorField v = flux(f, spectral);
  const double floor = rho_floor(f);
  v.masked.assign(f.grid.size(), 0);
  const long n = long(f.grid.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const double rho = f.rho(i);
    if (rho < floor) {
      v.masked[i] = 1;
      for (int a = 0; a < f.grid.dims; ++a) v.comp[a][i] = 0.0;
    } else {
      for (int a = 0; a < f.grid.dims; ++a) v.comp[a][i] /= rho;
    }
  }
  return v;
}

namespace {

// H psi on the grid (spectral Laplacian + tabulated V).
std::vector<std::complex<double>> apply_hamiltonian(const SchrodingerField& f,
                                                    const Potential& v) {
  const auto& g = f.grid;
  std::vector<std::complex<double>> z(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) z[i] = f.psi(i);
  SpectralTransform fft(g);
  fft.forward(z.data());
  const double kin = f.hbar * f.hbar / (2.0 * f.mass);
  if (g.dims == 1) {
    for (std::size_t i = 0; i < g.n[0]; ++i) {
      const double k = g.wavenumber(0, i);
      z[i] *= kin * k * k;
    }
  } else {
    for (std::size_t ix = 0; ix < g.n[0]; ++ix)
      for (std::size_t iy = 0; iy < g.n[1]; ++iy) {
        const double kx = g.wavenumber(0, ix), ky = g.wavenumber(1, iy);
        z[g.index(ix, iy)] *= kin * (kx * kx + ky * ky);
      }
  }
  fft.backward(z.data());
  const auto vt = v.tabulate(g);
  for (std::size_t i = 0; i < g.size(); ++i) z[i] += vt[i] * f.psi(i);
  return z;
}

}  // namespace

MaskedScalarField local_energy(const SchrodingerField& f, const Potential& v) {
  MaskedScalarField e;
  e.value.assign(f.grid.size(), 0.0);
  e.masked.assign(f.grid.size(), 0);
  const auto hpsi = apply_hamiltonian(f, v);
  const double floor = rho_floor(f);
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    const double rho = f.rho(i);
    if (rho < floor) {
      e.masked[i] = 1;
    } else {
      // Re[(H psi)/psi] = Re[psi* H psi] / rho
      e.value[i] = (f.phi_r[i] * hpsi[i].real() + f.phi_c[i] * hpsi[i].imag()) / rho;
    }
  }
  return e;
}

double mean_position(const SchrodingerField& f, int axis) {
  const auto& g = f.grid;
  double s = 0.0;
  if (g.dims == 1) {
    for (std::size_t i = 0; i < g.n[0]; ++i) s += g.coord(0, i) * f.rho(i);
  } else {
    for (std::size_t ix = 0; ix < g.n[0]; ++ix)
      for (std::size_t iy = 0; iy < g.n[1]; ++iy)
        s += g.coord(axis, axis == 0 ? ix : iy) * f.rho(g.index(ix, iy));
  }
  return s * g.cell_volume() / f.norm();
}

double mean_momentum(const SchrodingerField& f, int axis) {
  // <p> = m * integral of j
  const auto j = flux(f);
  return f.mass * kernels::sum(j.comp[axis]) * f.grid.cell_volume() / f.norm();
}

double mean_energy(const SchrodingerField& f, const Potential& v) {
  const auto hpsi = apply_hamiltonian(f, v);
  double s = 0.0;
  for (std::size_t i = 0; i < f.grid.size(); ++i)
    s += f.phi_r[i] * hpsi[i].real() + f.phi_c[i] * hpsi[i].imag();
  return s * f.grid.cell_volume() / f.norm();
}

EhrenfestRates ehrenfest_rates(const SchrodingerField& f, const Potential& v, double dt) {
  EhrenfestRates r;
  SplitStepPropagator prop(f.grid, v, f.hbar, f.mass);
  const auto fwd = prop.propagate_complex(f, dt, 1);
  for (int a = 0; a < f.grid.dims; ++a) {
    r.dq_dt[a] = (mean_position(fwd, a) - mean_position(f, a)) / dt;
    r.dp_dt[a] = (mean_momentum(fwd, a) - mean_momentum(f, a)) / dt;
  }
  // -<grad V> by quadrature of the analytic gradient against rho.
  const auto& g = f.grid;
  for (int a = 0; a < g.dims; ++a) {
    double s = 0.0;
    if (g.dims == 1) {
      for (std::size_t i = 0; i < g.n[0]; ++i)
        s += v.grad({g.coord(0, i), 0.0}, 1, 0) * f.rho(i);
    } else {
      for (std::size_t ix = 0; ix < g.n[0]; ++ix)
        for (std::size_t iy = 0; iy < g.n[1]; ++iy)
          s += v.grad({g.coord(0, ix), g.coord(1, iy)}, 2, a) * f.rho(g.index(ix, iy));
    }
    r.minus_grad_v[a] = -s * g.cell_volume() / f.norm();
  }
  return r;
}

double continuity_residual(const SchrodingerField& f0, const SchrodingerField& f1) {
  if (!f0.grid.same_as(f1.grid)) throw domain_error("continuity_residual: grid mismatch");
  const double dt = f1.time - f0.time;
  if (dt <= 0.0) throw domain_error("continuity_residual: snapshots must be time-ordered");
  const auto j0 = flux(f0);
  const auto j1 = flux(f1);
  const auto& g = f0.grid;
  std::vector<double> defect(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    defect[i] = (f1.rho(i) - f0.rho(i)) / dt;
  for (int a = 0; a < g.dims; ++a) {
    std::vector<double> jm(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) jm[i] = 0.5 * (j0.comp[a][i] + j1.comp[a][i]);
    const auto div = gradient_spectral(g, jm, a);
    for (std::size_t i = 0; i < g.size(); ++i) defect[i] += div[i];
  }
  return std::sqrt(kernels::dot(defect, defect) * g.cell_volume());
}

FluxDecomposition two_packet_flux_decomposition(const Grid& g, const std::vector<double>& R1,
                                                const std::vector<double>& S1,
                                                const std::vector<double>& R2,
                                                const std::vector<double>& S2, double hbar,
                                                double mass) {
  if (R1.size() != g.size() || S1.size() != g.size() || R2.size() != g.size() ||
      S2.size() != g.size())
    throw domain_error("two_packet_flux_decomposition: array length mismatch");
  const auto dR1 = gradient_fd4(g, R1, 0);
  const auto dR2 = gradient_fd4(g, R2, 0);
  const auto dS1 = gradient_fd4(g, S1, 0);
  const auto dS2 = gradient_fd4(g, S2, 0);
  FluxDecomposition out;
  out.direct.resize(g.size());
  out.cross_sin.resize(g.size());
  out.cross_cos.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double delta = (S1[i] - S2[i]) / hbar;
    out.direct[i] = (R1[i] * R1[i] * dS1[i] + R2[i] * R2[i] * dS2[i]) / mass;
    out.cross_sin[i] =
        hbar * (R2[i] * dR1[i] - R1[i] * dR2[i]) * std::sin(delta) / mass;
    out.cross_cos[i] = R1[i] * R2[i] * (dS1[i] + dS2[i]) * std::cos(delta) / mass;
  }
  return out;
}

ObservableRecord observe(const SchrodingerField& f, const Potential& v) {
  ObservableRecord r;
  r.time = f.time;
  r.norm = f.norm();
  r.energy = mean_energy(f, v);
  for (int a = 0; a < f.grid.dims; ++a) {
    r.position_mean[a] = mean_position(f, a);
    r.momentum_mean[a] = mean_momentum(f, a);
  }
  return r;
}

}  // namespace ow
