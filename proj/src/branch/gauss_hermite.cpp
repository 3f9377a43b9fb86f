#include "ow/gauss_hermite.hpp"

#include <cmath>

#include "ow/errors.hpp"

namespace ow {

// Newton iteration on the Hermite recurrence (orthonormal form), largest
// root first with the standard asymptotic starting guesses.
GaussHermiteRule gauss_hermite(std::size_t n) {
  if (n == 0) throw domain_error("gauss_hermite: order must be positive");
  GaussHermiteRule rule;
  rule.x.assign(n, 0.0);
  rule.w.assign(n, 0.0);
  const double pim4 = 0.7511255444649425;  // pi^{-1/4}
  const std::size_t m = (n + 1) / 2;
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(double(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.x[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.x[1];
    } else {
      z = 2.0 * z - rule.x[i - 2];
    }
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / double(j + 1)) * p2 -
             std::sqrt(double(j) / double(j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * double(n)) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    rule.x[i] = z;
    rule.x[n - 1 - i] = -z;
    rule.w[i] = 2.0 / (pp * pp);
    rule.w[n - 1 - i] = rule.w[i];
  }
  if (n % 2 == 1) rule.x[m - 1] = 0.0;
  return rule;
}

}  // namespace ow
