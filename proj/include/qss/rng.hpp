#pragma once

#include <cstdint>

namespace qss {

// Counter-based splittable random stream.
//
// Each stream is an independent SplitMix64 sequence whose starting counter is
// derived from (seed, stream_id) by double-mixing, so any number of streams can
// be created up front and consumed in any order (or in parallel) with the same
// results as serial execution.  The algorithm, in full:
//
//   mix(z):  z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
//            z ^= z >> 27;  z *= 0x94D049BB133111EB
//            z ^= z >> 31;  return z            (all on 64-bit wrapping ints)
//
//   start counter = mix(seed XOR mix(stream_id + 0x9E3779B97F4A7C15))
//   each draw:      counter += 0x9E3779B97F4A7C15;  output = mix(counter)
//
//   uniform in [0,1) = (output >> 11) * 2^-53
//
// Every random decision in the simulator consumes exactly one next_uniform()
// from the round's own stream, in a documented canonical order, which is what
// makes transcripts reproducible from (seed, round_id) alone.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : counter_(mix(seed ^ mix(stream_id + kGolden))) {}

  std::uint64_t next_u64() {
    counter_ += kGolden;
    return mix(counter_);
  }

  // Uniform double in [0,1), 53 random mantissa bits.
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform index in [0,n): floor(u*n), clamped against the u -> 1 rounding edge.
  int next_index(int n) {
    const int i = static_cast<int>(next_uniform() * n);
    return i < n ? i : n - 1;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t counter_;
};

}  // namespace qss
