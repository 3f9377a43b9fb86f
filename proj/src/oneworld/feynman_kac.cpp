#include "ow/feynman_kac.hpp"

#include <cmath>
#include <vector>

#include "ow/errors.hpp"
#include "ow/kernels.hpp"
#include "ow/rng.hpp"

namespace ow {

FeynmanKacResult feynman_kac_estimate(const Potential& v, double lambda, double diffusion_d,
                                      double x_target, double t, std::size_t n_samples,
                                      std::size_t n_time_steps, std::uint64_t seed) {
  if (t <= 0.0) throw domain_error("feynman_kac_estimate: t must be positive");
  const double dt = t / double(n_time_steps);
  const double kernel =
      std::exp(-x_target * x_target / (4.0 * diffusion_d * t)) /
      std::sqrt(4.0 * M_PI * diffusion_d * t);

  std::vector<double> weights(n_samples);
  const long n = long(n_samples);
#pragma omp parallel for schedule(static)
  for (long s = 0; s < n; ++s) {
    PathRng rng(seed, std::uint64_t(s));
    // Free path W from 0, then the bridge B_s = W_s - (s/t)(W_t - x).
    std::vector<double> w(n_time_steps + 1);
    w[0] = 0.0;
    const double sigma = std::sqrt(2.0 * diffusion_d * dt);
    for (std::size_t k = 0; k < n_time_steps; ++k)
      w[k + 1] = w[k] + sigma * rng.normal(k, 0);
    const double slope = (w[n_time_steps] - x_target) / t;
    // trapezoid along the bridge
    double integral = 0.5 * v.value1d(0.0) + 0.5 * v.value1d(x_target);
    for (std::size_t k = 1; k < n_time_steps; ++k) {
      const double s_k = double(k) * dt;
      integral += v.value1d(w[k] - slope * s_k);
    }
    integral *= dt;
    weights[s] = std::exp(-lambda * integral);
  }

  const double mean = kernels::sum(weights) / double(n_samples);
  double var = 0.0;
  for (double w : weights) var += (w - mean) * (w - mean);
  var /= double(n_samples > 1 ? n_samples - 1 : 1);

  FeynmanKacResult r;
  r.value = kernel * mean;
  r.std_error = kernel * std::sqrt(var / double(n_samples));
  r.n_samples = n_samples;
  return r;
}

}  // namespace ow
