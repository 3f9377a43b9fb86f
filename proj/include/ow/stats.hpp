#pragma once

#include <cstddef>
#include <vector>

#include "ow/grid.hpp"

namespace ow {

// Piecewise-linear CDF of a nonnegative density tabulated on grid cells.
class GridCdf {
 public:
  GridCdf(const std::vector<double>& density, double lo, double dx);
  double cdf(double x) const;
  // Inverse CDF: maps u in [0,1) to a coordinate.
  double quantile(double u) const;
  double lo() const { return lo_; }
  double hi() const { return lo_ + dx_ * double(cum_.size() - 1); }

 private:
  double lo_, dx_;
  std::vector<double> cum_;  // cum_[i] = CDF at lo + i*dx, cum_.back() = 1
};

// Kolmogorov-Smirnov distance between a sample and a reference CDF.
double ks_distance(std::vector<double> samples, const GridCdf& ref);

// Upper critical value of chi^2 with k dof at the 99% level
// (Wilson-Hilferty approximation).
double chi2_critical_99(std::size_t k);

struct Histogram {
  double lo = 0.0, bin_width = 0.0;
  std::vector<double> count;
  double center(std::size_t i) const { return lo + (double(i) + 0.5) * bin_width; }
};
Histogram make_histogram(const std::vector<double>& samples, double lo, double hi,
                         std::size_t bins);

// Indices of strict interior local maxima above `floor` * max(count).
std::vector<std::size_t> local_maxima(const std::vector<double>& y, double floor = 0.05);

double sample_mean(const std::vector<double>& x);
double sample_variance(const std::vector<double>& x);

}  // namespace ow
