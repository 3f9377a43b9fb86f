// Timing comparison between the OpenMP kernels and their serial reference
// twins, plus the end-to-end propagator at a few grid sizes.

#include <chrono>
#include <cstdio>
#include <vector>

#include "ow/field.hpp"
#include "ow/kernels.hpp"
#include "ow/potential.hpp"
#include "ow/propagator.hpp"

namespace {

using clock_t_ = std::chrono::steady_clock;

template <class F>
double time_ms(F&& f, int reps) {
  const auto t0 = clock_t_::now();
  for (int r = 0; r < reps; ++r) f();
  return std::chrono::duration<double, std::milli>(clock_t_::now() - t0).count() /
         double(reps);
}

}  // namespace

int main() {
  std::printf("%-28s %12s %12s %8s\n", "kernel", "serial [ms]", "omp [ms]", "speedup");
  for (const std::size_t n : {1 << 14, 1 << 18, 1 << 21}) {
    std::vector<double> pr(n, 0.5), pc(n, 0.25), angle(n);
    for (std::size_t i = 0; i < n; ++i) angle[i] = 1e-3 * double(i % 97);

    auto pr2 = pr, pc2 = pc;
    const double ts = time_ms([&] { ow::serial::rotate_pair(pr, pc, angle); }, 5);
    const double tp = time_ms([&] { ow::kernels::rotate_pair(pr2, pc2, angle); }, 5);
    std::printf("rotate_pair            n=%-8zu %10.3f %10.3f %8.2f\n", n, ts, tp, ts / tp);

    const double ss = time_ms([&] { (void)ow::serial::dot(pr, pc); }, 10);
    const double sp = time_ms([&] { (void)ow::kernels::dot(pr2, pc2); }, 10);
    std::printf("dot                    n=%-8zu %10.3f %10.3f %8.2f\n", n, ss, sp, ss / sp);
  }

  std::printf("\n%-28s %12s\n", "propagator (100 steps)", "[ms]");
  for (const std::size_t n : {1024, 4096, 16384}) {
    const auto grid = ow::Grid::line(-20.0, 20.0, n);
    const auto pot = ow::Potential::harmonic(1.0);
    const auto f0 = ow::init_coherent_state(grid, 1.0, 0.0, 0.5);
    ow::SplitStepPropagator prop(grid, pot, 1.0, 1.0);
    const double t = time_ms([&] { (void)prop.propagate_complex(f0, 1e-3, 100); }, 3);
    std::printf("complex                n=%-8zu %10.3f\n", n, t);
    const double tr = time_ms([&] { (void)prop.propagate_real_vector(f0, 1e-3, 100); }, 3);
    std::printf("real-vector            n=%-8zu %10.3f\n", n, tr);
  }
  return 0;
}
