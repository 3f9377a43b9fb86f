#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace ow {

// Uniform periodic grid in 1 or 2 dimensions. Points per axis must be a
// power of two; the interval [lo, hi) is sampled at lo + i*spacing.
struct Grid {
  int dims = 1;
  std::array<std::size_t, 2> n{1, 1};
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{0.0, 0.0};

  static Grid line(double lo, double hi, std::size_t n_points);
  static Grid plane(double x_lo, double x_hi, std::size_t nx,
                    double y_lo, double y_hi, std::size_t ny);

  std::size_t size() const { return dims == 1 ? n[0] : n[0] * n[1]; }
  double spacing(int axis) const { return (hi[axis] - lo[axis]) / double(n[axis]); }
  double cell_volume() const {
    return dims == 1 ? spacing(0) : spacing(0) * spacing(1);
  }
  double coord(int axis, std::size_t i) const { return lo[axis] + spacing(axis) * double(i); }
  double length(int axis) const { return hi[axis] - lo[axis]; }
  // Row-major: index = ix*n[1] + iy in 2D.
  std::size_t index(std::size_t ix, std::size_t iy) const { return ix * n[1] + iy; }
  // Signed spectral wavenumber for mode i on the given axis.
  double wavenumber(int axis, std::size_t i) const;

  bool same_as(const Grid& other) const;
};

}  // namespace ow
