#pragma once

// Counter-based random streams.
//
// A stream is identified by a 64-bit key; draw k of the stream is
// splitmix64_mix(key + (k + 1) * golden), i.e. the SplitMix64 output function
// applied to a Weyl sequence. Because a draw depends only on (key, k), streams
// can be created anywhere, in any order, on any thread, and always produce the
// same numbers.
//
// Stream splitting:
//   stream_key(seed, purpose)          one independent stream per (seed, purpose)
//   derive_seed(seed_base, a, b, ...)  trial seeds for Monte-Carlo grids
// Both fold their arguments through the SplitMix64 mixer so that nearby inputs
// (seed 1 vs seed 2, rep 0 vs rep 1) land on unrelated keys.

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace angsync {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// What a stream is used for; each purpose gets a disjoint key for a given seed.
enum class StreamPurpose : std::uint64_t {
  Signal = 1,
  Noise = 2,
  RealSignal = 3,
  RealNoise = 4,
  Test = 99,
};

constexpr std::uint64_t stream_key(std::uint64_t seed, StreamPurpose purpose) {
  return splitmix64_mix(splitmix64_mix(seed) ^ (static_cast<std::uint64_t>(purpose) * kGolden));
}

/// Hash-combine an ordered list of integers into a seed.
inline std::uint64_t derive_seed(std::uint64_t seed_base, std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = splitmix64_mix(seed_base ^ 0x6a09e667f3bcc909ULL);
  for (std::uint64_t p : parts) h = splitmix64_mix(h ^ splitmix64_mix(p + kGolden));
  return h;
}

/// UniformRandomBitGenerator over a counter-based stream.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0) : key_(key), counter_(counter) {}
  CounterRng(std::uint64_t seed, StreamPurpose purpose) : key_(stream_key(seed, purpose)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return splitmix64_mix(key_ + (++counter_) * kGolden); }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace angsync
