#include "ow/stats.hpp"

#include <algorithm>
#include <cmath>

#include "ow/errors.hpp"

namespace ow {

GridCdf::GridCdf(const std::vector<double>& density, double lo, double dx)
    : lo_(lo), dx_(dx) {
  cum_.resize(density.size() + 1, 0.0);
  for (std::size_t i = 0; i < density.size(); ++i)
    cum_[i + 1] = cum_[i] + std::max(0.0, density[i]);
  const double total = cum_.back();
  if (total <= 0.0) throw domain_error("GridCdf: density integrates to zero");
  for (auto& c : cum_) c /= total;
}

double GridCdf::cdf(double x) const {
  if (x <= lo_) return 0.0;
  const double t = (x - lo_) / dx_;
  const auto i = std::size_t(t);
  if (i + 1 >= cum_.size()) return 1.0;
  const double frac = t - double(i);
  return cum_[i] + frac * (cum_[i + 1] - cum_[i]);
}

double GridCdf::quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  if (it == cum_.begin()) return lo_;
  const auto i = std::size_t(it - cum_.begin()) - 1;
  if (i + 1 >= cum_.size()) return hi();
  const double lo_c = cum_[i], hi_c = cum_[i + 1];
  const double frac = (hi_c > lo_c) ? (u - lo_c) / (hi_c - lo_c) : 0.0;
  return lo_ + dx_ * (double(i) + frac);
}

double ks_distance(std::vector<double> samples, const GridCdf& ref) {
  std::sort(samples.begin(), samples.end());
  const double n = double(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = ref.cdf(samples[i]);
    d = std::max(d, std::abs(double(i + 1) / n - f));
    d = std::max(d, std::abs(f - double(i) / n));
  }
  return d;
}

double chi2_critical_99(std::size_t k) {
  const double z99 = 2.3263478740408408;  // standard normal 99% quantile
  const double kk = double(k);
  const double t = 1.0 - 2.0 / (9.0 * kk) + z99 * std::sqrt(2.0 / (9.0 * kk));
  return kk * t * t * t;
}

Histogram make_histogram(const std::vector<double>& samples, double lo, double hi,
                         std::size_t bins) {
  Histogram h;
  h.lo = lo;
  h.bin_width = (hi - lo) / double(bins);
  h.count.assign(bins, 0.0);
  for (double x : samples) {
    if (x < lo || x >= hi) continue;
    const auto i = std::size_t((x - lo) / h.bin_width);
    h.count[std::min(i, bins - 1)] += 1.0;
  }
  return h;
}

std::vector<std::size_t> local_maxima(const std::vector<double>& y, double floor) {
  std::vector<std::size_t> out;
  if (y.size() < 3) return out;
  double peak = 0.0;
  for (double v : y) peak = std::max(peak, v);
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > floor * peak) out.push_back(i);
  return out;
}

double sample_mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / double(x.size());
}

double sample_variance(const std::vector<double>& x) {
  const double m = sample_mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / double(x.size() - 1);
}

}  // namespace ow
