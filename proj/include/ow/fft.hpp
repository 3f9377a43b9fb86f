#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "ow/grid.hpp"

namespace ow {

// Thin RAII wrapper over FFTW c2c plans for a fixed grid. Plans are created
// with FFTW_ESTIMATE so the chosen algorithm (and hence rounding) is
// reproducible across runs. Not shareable while executing.
class SpectralTransform {
 public:
  explicit SpectralTransform(const Grid& grid);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  // In-place unnormalized forward / normalized backward transform.
  void forward(std::complex<double>* data);
  void backward(std::complex<double>* data);

  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
  std::vector<std::complex<double>> buffer_;
  double inv_n_ = 1.0;
};

}  // namespace ow
