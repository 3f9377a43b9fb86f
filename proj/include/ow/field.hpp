#pragma once

#include <array>
#include <complex>
#include <vector>

#include "ow/grid.hpp"

namespace ow {

// The Schrodinger vector (phi_r, phi_c) on a grid; rho = phi_r^2 + phi_c^2.
// Fields are values: propagators and observables never mutate their input.
struct SchrodingerField {
  Grid grid;
  std::vector<double> phi_r;
  std::vector<double> phi_c;
  double time = 0.0;
  double hbar = 1.0;
  double mass = 1.0;

  std::complex<double> psi(std::size_t i) const { return {phi_r[i], phi_c[i]}; }
  double rho(std::size_t i) const { return phi_r[i] * phi_r[i] + phi_c[i] * phi_c[i]; }

  // integral of rho over the domain
  double norm() const;
  void normalize();
};

// Gaussian packet exp(-gamma (q-q0)^2 + i p0 (q-q0)/hbar), per axis in 2D,
// normalized. Re(gamma) must be positive and the 1e-12 tail must fit the grid.
SchrodingerField init_coherent_state(const Grid& grid,
                                     std::array<double, 2> q0,
                                     std::array<double, 2> p0,
                                     std::array<std::complex<double>, 2> gamma,
                                     double hbar = 1.0, double mass = 1.0);

inline SchrodingerField init_coherent_state(const Grid& grid, double q0, double p0,
                                            std::complex<double> gamma, double hbar = 1.0,
                                            double mass = 1.0) {
  return init_coherent_state(grid, {q0, 0.0}, {p0, 0.0}, {gamma, gamma}, hbar, mass);
}

}  // namespace ow
