#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

// Data-parallel inner loops used by the propagators and observables.
// Every kernel has a serial reference twin in ow::serial with identical
// semantics; tests compare the two and the benchmark tool times them.
// Reductions run over a fixed chunk partition so results do not depend
// on the number of threads.

namespace ow::detail {

inline constexpr std::size_t kReduceChunks = 64;

template <class F>
double chunked_reduce_serial(std::size_t n, F&& partial) {
  double chunk_sums[kReduceChunks] = {};
  const std::size_t step = (n + kReduceChunks - 1) / kReduceChunks;
  for (std::size_t c = 0; c < kReduceChunks; ++c) {
    const std::size_t b = c * step;
    const std::size_t e = std::min(n, b + step);
    if (b < e) chunk_sums[c] = partial(b, e);
  }
  double total = 0.0;
  for (double s : chunk_sums) total += s;
  return total;
}

template <class F>
double chunked_reduce_omp(std::size_t n, F&& partial) {
  double chunk_sums[kReduceChunks] = {};
  const std::size_t step = (n + kReduceChunks - 1) / kReduceChunks;
#pragma omp parallel for schedule(static)
  for (long c = 0; c < long(kReduceChunks); ++c) {
    const std::size_t b = std::size_t(c) * step;
    const std::size_t e = std::min(n, b + step);
    if (b < e) chunk_sums[c] = partial(b, e);
  }
  double total = 0.0;
  for (double s : chunk_sums) total += s;
  return total;
}

}  // namespace ow::detail

namespace ow::serial {

// (phi_r, phi_c) <- [[cos a, sin a], [-sin a, cos a]] (phi_r, phi_c),
// the J-rotation generated by a scalar per-point angle a.
inline void rotate_pair(std::span<double> phi_r, std::span<double> phi_c,
                        std::span<const double> angle) {
  for (std::size_t i = 0; i < phi_r.size(); ++i) {
    const double ca = std::cos(angle[i]), sa = std::sin(angle[i]);
    const double r = phi_r[i], c = phi_c[i];
    phi_r[i] = ca * r + sa * c;
    phi_c[i] = -sa * r + ca * c;
  }
}

// z_i <- z_i * exp(-i a_i)
inline void phase_multiply(std::span<std::complex<double>> z, std::span<const double> angle) {
  for (std::size_t i = 0; i < z.size(); ++i)
    z[i] *= std::complex<double>(std::cos(angle[i]), -std::sin(angle[i]));
}

inline void scale(std::span<std::complex<double>> z, double s) {
  for (auto& v : z) v *= s;
}

inline double sum(std::span<const double> x) {
  return ow::detail::chunked_reduce_serial(x.size(), [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += x[i];
    return s;
  });
}

inline double dot(std::span<const double> x, std::span<const double> y) {
  return ow::detail::chunked_reduce_serial(x.size(), [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += x[i] * y[i];
    return s;
  });
}

inline double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

}  // namespace ow::serial

namespace ow::kernels {

inline void rotate_pair(std::span<double> phi_r, std::span<double> phi_c,
                        std::span<const double> angle) {
  const long n = long(phi_r.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const double ca = std::cos(angle[i]), sa = std::sin(angle[i]);
    const double r = phi_r[i], c = phi_c[i];
    phi_r[i] = ca * r + sa * c;
    phi_c[i] = -sa * r + ca * c;
  }
}

inline void phase_multiply(std::span<std::complex<double>> z, std::span<const double> angle) {
  const long n = long(z.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i)
    z[i] *= std::complex<double>(std::cos(angle[i]), -std::sin(angle[i]));
}

inline void scale(std::span<std::complex<double>> z, double s) {
  const long n = long(z.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) z[i] *= s;
}

inline double sum(std::span<const double> x) {
  return ow::detail::chunked_reduce_omp(x.size(), [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += x[i];
    return s;
  });
}

inline double dot(std::span<const double> x, std::span<const double> y) {
  return ow::detail::chunked_reduce_omp(x.size(), [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += x[i] * y[i];
    return s;
  });
}

inline double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double chunk_max[ow::detail::kReduceChunks] = {};
  const std::size_t step = (n + ow::detail::kReduceChunks - 1) / ow::detail::kReduceChunks;
#pragma omp parallel for schedule(static)
  for (long c = 0; c < long(ow::detail::kReduceChunks); ++c) {
    const std::size_t b = std::size_t(c) * step;
    const std::size_t e = std::min(n, b + step);
    double m = 0.0;
    for (std::size_t i = b; i < e; ++i) m = std::max(m, std::abs(x[i] - y[i]));
    chunk_max[c] = m;
  }
  double m = 0.0;
  for (double v : chunk_max) m = std::max(m, v);
  return m;
}

}  // namespace ow::kernels
