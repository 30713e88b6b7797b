#pragma once

// Counter-derived random streams. The stream for (master_seed, index, attempt)
// is computed directly by hashing the triple, so iteration i never depends on
// iterations 0..i-1 and results do not depend on how work is split.

#include <cstdint>
#include <limits>

namespace degen_dt {

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t iteration_index = 0;
  std::uint64_t attempt = 0;  // bumped when a degenerate sample is resampled
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_key(std::uint64_t master, std::uint64_t index, std::uint64_t attempt,
                                   std::uint64_t domain = 0) {
  std::uint64_t h = splitmix64(master ^ 0x6A09E667F3BCC909ULL);
  h = splitmix64(h ^ index);
  h = splitmix64(h ^ (attempt * 0xD1B54A32D192ED03ULL));
  return splitmix64(h ^ (domain * 0x8CB92BA72F3D8DD7ULL));
}

/// xoshiro256** seeded from a derived key; models UniformRandomBitGenerator.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  explicit StreamRng(std::uint64_t key) {
    std::uint64_t s = key;
    for (auto& word : state_) {
      s += 0x9E3779B97F4A7C15ULL;
      word = splitmix64(s);
    }
  }

  explicit StreamRng(const SeedSpec& seed, std::uint64_t domain = 0)
      : StreamRng(derive_key(seed.master_seed, seed.iteration_index, seed.attempt, domain)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1p-53; }

  bool coin() { return ((*this)() >> 63) != 0; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
};

}  // namespace degen_dt
