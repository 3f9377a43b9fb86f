#pragma once

#include <cstdint>
#include <vector>

#include "ow/potential.hpp"

namespace ow {

// Monte-Carlo estimate of the Green function G(x, t) of
//   du/dt = D d2u/dq2 - lambda V u,  G(., 0) = delta,
// as (free heat kernel to x) * E[ exp(-lambda * int V ds) ] over Brownian
// bridges from 0 to x with diffusion D (increment variance 2 D dt).
struct FeynmanKacResult {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

FeynmanKacResult feynman_kac_estimate(const Potential& v, double lambda, double diffusion_d,
                                      double x_target, double t, std::size_t n_samples,
                                      std::size_t n_time_steps, std::uint64_t seed);

}  // namespace ow
