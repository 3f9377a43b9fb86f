#pragma once

#include <array>
#include <cstdint>

namespace ow {

// Philox4x32-10 counter-based generator. Draws are addressed by
// (seed, stream, step, slot), so paths own independent streams and an
// ensemble produces the same numbers regardless of evaluation order or
// thread count.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t stream_id)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
        stream_lo_(std::uint32_t(stream_id)),
        stream_hi_(std::uint32_t(stream_id >> 32)) {}

  // Two independent U(0,1) variates for the given (step, slot) address.
  std::array<double, 2> uniform2(std::uint64_t step, std::uint32_t slot) const;
  // Two independent standard normals (Box-Muller on uniform2).
  std::array<double, 2> normal2(std::uint64_t step, std::uint32_t slot) const;
  double normal(std::uint64_t step, std::uint32_t slot) const {
    return normal2(step, slot)[0];
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_lo_, stream_hi_;
};

}  // namespace ow
