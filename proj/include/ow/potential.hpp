#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "ow/grid.hpp"

namespace ow {

// System potential V(q). Analytic variants carry their parameters; the
// sampled variant holds per-grid-point values.
class Potential {
 public:
  enum class Kind { free, harmonic, gaussian_barrier, eckart, double_slit_mask, sampled };

  static Potential free_space();
  // V = 1/2 m omega^2 |q - center|^2
  static Potential harmonic(double omega, double center = 0.0, double mass = 1.0);
  // V = height * exp(-(q - center)^2 / (2 width^2))
  static Potential gaussian_barrier(double height, double width, double center = 0.0);
  // V = height / cosh^2(q / width)
  static Potential eckart(double height, double width);
  // Wall of the given height and thickness at x = wall_x, open on two slits
  // centered at slit_centers with full widths slit_widths (2D only).
  static Potential double_slit_mask(double wall_x, double thickness,
                                    std::array<double, 2> slit_centers,
                                    std::array<double, 2> slit_widths, double height);
  static Potential sampled(Grid grid, std::vector<double> values);

  Kind kind() const { return kind_; }
  std::string name() const;

  double value(const std::array<double, 2>& q, int dims) const;
  double value1d(double q) const { return value({q, 0.0}, 1); }
  // Analytic or centered-difference derivatives along the given axis.
  double grad(const std::array<double, 2>& q, int dims, int axis) const;
  double second(double q) const;   // V'' (1D)
  double fourth(double q) const;   // V'''' (1D)

  // Fills V at every grid point, row-major.
  std::vector<double> tabulate(const Grid& g) const;

  double omega() const { return p0_; }
  double height() const { return p0_; }
  double width() const { return p1_; }

 private:
  Kind kind_ = Kind::free;
  double p0_ = 0.0, p1_ = 0.0, p2_ = 0.0, p3_ = 0.0;
  std::array<double, 2> slit_centers_{0.0, 0.0};
  std::array<double, 2> slit_widths_{0.0, 0.0};
  Grid sample_grid_;
  std::vector<double> samples_;
};

}  // namespace ow
