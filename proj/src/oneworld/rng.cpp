#include "ow/rng.hpp"

#include <cmath>

namespace ow {

namespace {
constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c, std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = std::uint64_t(kPhiloxM0) * c[0];
  const std::uint64_t p1 = std::uint64_t(kPhiloxM1) * c[2];
  c = {std::uint32_t(p1 >> 32) ^ c[1] ^ k[0], std::uint32_t(p1),
       std::uint32_t(p0 >> 32) ^ c[3] ^ k[1], std::uint32_t(p0)};
  k[0] += kPhiloxW0;
  k[1] += kPhiloxW1;
}
}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int r = 0; r < 10; ++r) philox_round(counter, key);
  return counter;
}

std::array<double, 2> PathRng::uniform2(std::uint64_t step, std::uint32_t slot) const {
  // Counter words: (step lo, step hi, stream, slot). Streams are 32-bit;
  // the high stream word folds into the slot word to keep addresses disjoint.
  const auto w = philox4x32({std::uint32_t(step), std::uint32_t(step >> 32), stream_lo_,
                             slot + (stream_hi_ * 0x10001u)},
                            key_);
  const auto u64a = (std::uint64_t(w[0]) << 32) | w[1];
  const auto u64b = (std::uint64_t(w[2]) << 32) | w[3];
  // 53-bit mantissas in (0,1)
  const double a = (double((u64a >> 11)) + 0.5) * 0x1.0p-53;
  const double b = (double((u64b >> 11)) + 0.5) * 0x1.0p-53;
  return {a, b};
}

std::array<double, 2> PathRng::normal2(std::uint64_t step, std::uint32_t slot) const {
  const auto u = uniform2(step, slot);
  const double r = std::sqrt(-2.0 * std::log(u[0]));
  return {r * std::cos(2.0 * M_PI * u[1]), r * std::sin(2.0 * M_PI * u[1])};
}

}  // namespace ow
