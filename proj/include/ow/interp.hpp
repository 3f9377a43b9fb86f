#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "ow/grid.hpp"

namespace ow::interp {

inline double catmull_rom(double fm1, double f0, double f1, double f2, double t) {
  return 0.5 * (2.0 * f0 + t * (f1 - fm1) +
                t * t * (2.0 * fm1 - 5.0 * f0 + 4.0 * f1 - f2) +
                t * t * t * (3.0 * (f0 - f1) + f2 - fm1));
}

inline std::size_t wrap(long i, long n) { return std::size_t(((i % n) + n) % n); }

// Periodic cubic interpolation of a grid array at x.
inline double cubic(const Grid& g, const std::vector<double>& f,
                    const std::array<double, 2>& x) {
  if (g.dims == 1) {
    const double t = (x[0] - g.lo[0]) / g.spacing(0);
    const long i0 = long(std::floor(t));
    const double u = t - double(i0);
    const long n = long(g.n[0]);
    return catmull_rom(f[wrap(i0 - 1, n)], f[wrap(i0, n)], f[wrap(i0 + 1, n)],
                       f[wrap(i0 + 2, n)], u);
  }
  const double tx = (x[0] - g.lo[0]) / g.spacing(0);
  const double ty = (x[1] - g.lo[1]) / g.spacing(1);
  const long ix0 = long(std::floor(tx)), iy0 = long(std::floor(ty));
  const double ux = tx - double(ix0), uy = ty - double(iy0);
  const long nx = long(g.n[0]), ny = long(g.n[1]);
  double rows[4];
  for (long r = -1; r <= 2; ++r) {
    const std::size_t ix = wrap(ix0 + r, nx);
    rows[r + 1] = catmull_rom(f[g.index(ix, wrap(iy0 - 1, ny))], f[g.index(ix, wrap(iy0, ny))],
                              f[g.index(ix, wrap(iy0 + 1, ny))],
                              f[g.index(ix, wrap(iy0 + 2, ny))], uy);
  }
  return catmull_rom(rows[0], rows[1], rows[2], rows[3], ux);
}

inline bool cell_masked(const Grid& g, const std::vector<unsigned char>& mask,
                        const std::array<double, 2>& x) {
  if (mask.empty()) return false;
  if (g.dims == 1) {
    const long i = long(std::floor((x[0] - g.lo[0]) / g.spacing(0)));
    return mask[wrap(i, long(g.n[0]))] != 0;
  }
  const long ix = long(std::floor((x[0] - g.lo[0]) / g.spacing(0)));
  const long iy = long(std::floor((x[1] - g.lo[1]) / g.spacing(1)));
  return mask[g.index(wrap(ix, long(g.n[0])), wrap(iy, long(g.n[1])))] != 0;
}

inline bool inside(const Grid& g, const std::array<double, 2>& x) {
  for (int a = 0; a < g.dims; ++a)
    if (x[a] < g.lo[a] || x[a] >= g.hi[a]) return false;
  return true;
}

}  // namespace ow::interp
