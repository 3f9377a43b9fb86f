#include "ow/fft.hpp"

#include <fftw3.h>

#include "ow/kernels.hpp"

namespace ow {

SpectralTransform::SpectralTransform(const Grid& grid) : grid_(grid) {
  buffer_.resize(grid.size());
  auto* b = reinterpret_cast<fftw_complex*>(buffer_.data());
  if (grid.dims == 1) {
    plan_fwd_ = fftw_plan_dft_1d(int(grid.n[0]), b, b, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_1d(int(grid.n[0]), b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
  } else {
    plan_fwd_ = fftw_plan_dft_2d(int(grid.n[0]), int(grid.n[1]), b, b, FFTW_FORWARD,
                                 FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_2d(int(grid.n[0]), int(grid.n[1]), b, b, FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
  }
  inv_n_ = 1.0 / double(grid.size());
}

SpectralTransform::~SpectralTransform() {
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void SpectralTransform::forward(std::complex<double>* data) {
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                   reinterpret_cast<fftw_complex*>(data),
                   reinterpret_cast<fftw_complex*>(data));
}

void SpectralTransform::backward(std::complex<double>* data) {
  fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_),
                   reinterpret_cast<fftw_complex*>(data),
                   reinterpret_cast<fftw_complex*>(data));
  kernels::scale({data, grid_.size()}, inv_n_);
}

}  // namespace ow
