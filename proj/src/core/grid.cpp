#include "ow/grid.hpp"

#include <cmath>

#include "ow/errors.hpp"

namespace ow {

namespace {
bool power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }
}

Grid Grid::line(double lo, double hi, std::size_t n_points) {
  if (hi <= lo) throw config_error("grid: extent_max must exceed extent_min");
  if (!power_of_two(n_points)) throw config_error("grid: n_points must be a power of two");
  Grid g;
  g.dims = 1;
  g.n = {n_points, 1};
  g.lo = {lo, 0.0};
  g.hi = {hi, 0.0};
  return g;
}

Grid Grid::plane(double x_lo, double x_hi, std::size_t nx,
                 double y_lo, double y_hi, std::size_t ny) {
  if (x_hi <= x_lo || y_hi <= y_lo) throw config_error("grid: extent_max must exceed extent_min");
  if (!power_of_two(nx) || !power_of_two(ny))
    throw config_error("grid: n_points must be a power of two");
  Grid g;
  g.dims = 2;
  g.n = {nx, ny};
  g.lo = {x_lo, y_lo};
  g.hi = {x_hi, y_hi};
  return g;
}

double Grid::wavenumber(int axis, std::size_t i) const {
  const double dk = 2.0 * M_PI / length(axis);
  const std::size_t half = n[axis] / 2;
  const auto si = (i <= half) ? double(i) : double(i) - double(n[axis]);
  return dk * si;
}

bool Grid::same_as(const Grid& o) const {
  return dims == o.dims && n == o.n && lo == o.lo && hi == o.hi;
}

}  // namespace ow
