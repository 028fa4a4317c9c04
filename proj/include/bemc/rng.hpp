#pragma once

#include <cmath>
#include <cstdint>

namespace bemc::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Stateless 64-bit finalizer (the SplitMix64 output function).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives the seed of replication stream i from one master seed.
// Streams are a pure function of (master_seed, i): schedule-invariant
// and safe to hand out to worker threads in any order.
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                        std::uint64_t replication_index) {
  return mix64(master_seed + (replication_index + 1) * kGolden);
}

// SplitMix64 stream. Small state, splittable via derive_stream_seed,
// and byte-reproducible for a given seed.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform on (0,1), never returning 0 or 1 (53-bit mantissa midpoints).
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace bemc::rng
