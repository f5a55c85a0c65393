#pragma once

#include <array>
#include <cstdint>

namespace hubofs {

/// splitmix64 step. Used only to expand a 64-bit seed into generator state.
std::uint64_t splitmix64(std::uint64_t& state);

/// xoshiro256** 1.0 (Blackman & Vigna), seeded by four successive splitmix64
/// outputs starting from the user seed.
///
/// The stream is fully specified so that other implementations can
/// reproduce it bit for bit:
///   - next():           xoshiro256** output (rotl(s1 * 5, 7) * 9)
///   - uniform():        (next() >> 11) * 2^-53, in [0, 1)
///   - random_spin():    next() >> 63 == 1 ? -1 : +1
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t next();
  double uniform();
  std::int8_t random_spin();

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace hubofs
