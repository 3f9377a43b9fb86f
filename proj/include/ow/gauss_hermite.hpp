#pragma once

#include <cstddef>
#include <vector>

namespace ow {

// Nodes and weights of the n-point Gauss-Hermite rule for weight exp(-x^2):
//   integral f(x) exp(-x^2) dx ~= sum_k w[k] f(x[k]).
struct GaussHermiteRule {
  std::vector<double> x;
  std::vector<double> w;
};

GaussHermiteRule gauss_hermite(std::size_t n);

}  // namespace ow
