#pragma once

// Test-only oracles, independent of the library's propagation paths.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "ow/field.hpp"

namespace oracles {

// Closed-form free evolution of exp(-q^2 / c0) (hbar = m = 1):
// psi(q, t) = N (c0 + 2 i t)^{-1/2}-style spreading Gaussian.
inline std::complex<double> free_gaussian(double q, double t, double c0) {
  const std::complex<double> ct(c0, 2.0 * t);
  return std::sqrt(std::complex<double>(c0, 0.0) / ct) * std::exp(-q * q / ct);
}

// Harmonic-oscillator ground state, hbar = m = 1.
inline double harmonic_ground(double q, double omega) {
  return std::pow(omega / M_PI, 0.25) * std::exp(-0.5 * omega * q * q);
}

inline ow::SchrodingerField field_from(const ow::Grid& grid,
                                       const std::function<std::complex<double>(double)>& f,
                                       double hbar = 1.0, double mass = 1.0) {
  ow::SchrodingerField out;
  out.grid = grid;
  out.hbar = hbar;
  out.mass = mass;
  out.phi_r.resize(grid.size());
  out.phi_c.resize(grid.size());
  for (std::size_t i = 0; i < grid.n[0]; ++i) {
    const auto z = f(grid.coord(0, i));
    out.phi_r[i] = z.real();
    out.phi_c[i] = z.imag();
  }
  return out;
}

inline double trapezoid_overlap_error(const ow::SchrodingerField& a,
                                      const ow::SchrodingerField& b) {
  double err2 = 0.0;
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    const double dr = a.phi_r[i] - b.phi_r[i];
    const double dc = a.phi_c[i] - b.phi_c[i];
    err2 += dr * dr + dc * dc;
  }
  return std::sqrt(err2 * a.grid.cell_volume());
}

}  // namespace oracles
