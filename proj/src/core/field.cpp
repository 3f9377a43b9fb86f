#include "ow/field.hpp"

#include <cmath>

#include "ow/errors.hpp"
#include "ow/kernels.hpp"

namespace ow {

double SchrodingerField::norm() const {
  const double a = kernels::dot(phi_r, phi_r) + kernels::dot(phi_c, phi_c);
  return a * grid.cell_volume();
}

void SchrodingerField::normalize() {
  const double n = norm();
  if (n <= 0.0) throw domain_error("field: cannot normalize a null field");
  const double s = 1.0 / std::sqrt(n);
  for (auto& v : phi_r) v *= s;
  for (auto& v : phi_c) v *= s;
}

SchrodingerField init_coherent_state(const Grid& grid, std::array<double, 2> q0,
                                     std::array<double, 2> p0,
                                     std::array<std::complex<double>, 2> gamma,
                                     double hbar, double mass) {
  for (int a = 0; a < grid.dims; ++a)
    if (gamma[a].real() <= 0.0)
      throw domain_error("init_coherent_state: Re(gamma) must be positive");

  SchrodingerField f;
  f.grid = grid;
  f.hbar = hbar;
  f.mass = mass;
  f.phi_r.resize(grid.size());
  f.phi_c.resize(grid.size());

  auto envelope = [&](int axis, double q) {
    const double dq = q - q0[axis];
    return std::exp(std::complex<double>(0.0, p0[axis] * dq / hbar) -
                    gamma[axis] * dq * dq);
  };

  if (grid.dims == 1) {
    for (std::size_t i = 0; i < grid.n[0]; ++i) {
      const auto z = envelope(0, grid.coord(0, i));
      f.phi_r[i] = z.real();
      f.phi_c[i] = z.imag();
    }
  } else {
    std::vector<std::complex<double>> ey(grid.n[1]);
    for (std::size_t iy = 0; iy < grid.n[1]; ++iy) ey[iy] = envelope(1, grid.coord(1, iy));
    for (std::size_t ix = 0; ix < grid.n[0]; ++ix) {
      const auto ex = envelope(0, grid.coord(0, ix));
      for (std::size_t iy = 0; iy < grid.n[1]; ++iy) {
        const auto z = ex * ey[iy];
        f.phi_r[grid.index(ix, iy)] = z.real();
        f.phi_c[grid.index(ix, iy)] = z.imag();
      }
    }
  }
  f.normalize();

  // Boundary tail check: the packet must fit inside the box.
  double edge = 0.0;
  if (grid.dims == 1) {
    edge = std::max(f.rho(0), f.rho(grid.n[0] - 1));
  } else {
    for (std::size_t ix = 0; ix < grid.n[0]; ++ix) {
      edge = std::max(edge, f.rho(grid.index(ix, 0)));
      edge = std::max(edge, f.rho(grid.index(ix, grid.n[1] - 1)));
    }
    for (std::size_t iy = 0; iy < grid.n[1]; ++iy) {
      edge = std::max(edge, f.rho(grid.index(0, iy)));
      edge = std::max(edge, f.rho(grid.index(grid.n[0] - 1, iy)));
    }
  }
  double peak = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) peak = std::max(peak, f.rho(i));
  if (edge > 1e-12 * peak)
    throw domain_error("init_coherent_state: packet tail exceeds 1e-12 at the grid boundary");
  return f;
}

}  // namespace ow
