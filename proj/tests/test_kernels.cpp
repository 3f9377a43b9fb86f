#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "ow/kernels.hpp"

// The OpenMP kernels must agree with their serial reference twins exactly:
// maps are elementwise and reductions share the fixed chunk partition.

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (auto& x : v) x = normal(rng);
  return v;
}

}  // namespace

TEST_CASE("rotate_pair matches the serial reference bitwise") {
  for (const std::size_t n : {1ul, 17ul, 4096ul, 100003ul}) {
    auto pr_a = random_vector(n, 1), pc_a = random_vector(n, 2);
    auto angle = random_vector(n, 3);
    auto pr_b = pr_a, pc_b = pc_a;
    ow::serial::rotate_pair(pr_a, pc_a, angle);
    ow::kernels::rotate_pair(pr_b, pc_b, angle);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(pr_a[i] == pr_b[i]);
      CHECK(pc_a[i] == pc_b[i]);
    }
  }
}

TEST_CASE("phase_multiply matches the serial reference bitwise") {
  const std::size_t n = 8192;
  const auto re = random_vector(n, 4), im = random_vector(n, 5), angle = random_vector(n, 6);
  std::vector<std::complex<double>> za(n), zb(n);
  for (std::size_t i = 0; i < n; ++i) za[i] = zb[i] = {re[i], im[i]};
  ow::serial::phase_multiply(za, angle);
  ow::kernels::phase_multiply(zb, angle);
  for (std::size_t i = 0; i < n; ++i) CHECK(za[i] == zb[i]);
}

TEST_CASE("reductions share the chunked partition result") {
  for (const std::size_t n : {1ul, 63ul, 64ul, 65ul, 4096ul, 999999ul}) {
    const auto x = random_vector(n, 7), y = random_vector(n, 8);
    CHECK(ow::serial::sum(x) == ow::kernels::sum(x));
    CHECK(ow::serial::dot(x, y) == ow::kernels::dot(x, y));
    CHECK(ow::serial::max_abs_diff(x, y) == ow::kernels::max_abs_diff(x, y));
  }
}

TEST_CASE("rotation preserves the pair norm") {
  const std::size_t n = 1024;
  auto pr = random_vector(n, 9), pc = random_vector(n, 10);
  const auto angle = random_vector(n, 11);
  const double before = ow::kernels::dot(pr, pr) + ow::kernels::dot(pc, pc);
  ow::kernels::rotate_pair(pr, pc, angle);
  const double after = ow::kernels::dot(pr, pr) + ow::kernels::dot(pc, pc);
  CHECK(after == doctest::Approx(before).epsilon(1e-13));
}
