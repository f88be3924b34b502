#pragma once

#include <cstdint>

namespace pbsi {

// Counter-based substreams: one root seed, independent streams derived per
// (episode, sensor, purpose).  Derivation and generation are plain splitmix64
// steps, so draws are identical across platforms, runs, and worker counts.

enum class StreamKind : std::uint64_t {
  Request = 1,
  Energy = 2,
  Channel = 3,
  Scheduler = 4,
  Assignment = 5,
  OftEval = 6,
};

inline constexpr std::uint64_t kSeedIncrement = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t derive_substream(std::uint64_t root, std::uint64_t episode,
                                         std::uint64_t sensor, StreamKind kind) {
  std::uint64_t h = root;
  h = mix64(h + kSeedIncrement + episode);
  h = mix64(h + kSeedIncrement + sensor);
  h = mix64(h + kSeedIncrement + static_cast<std::uint64_t>(kind));
  return h;
}

class RngStream {
 public:
  RngStream() = default;
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += kSeedIncrement;
    return mix64(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  int bernoulli(double p) { return uniform() < p ? 1 : 0; }

  // Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    std::uint64_t r = next_u64();
    while (r > limit) r = next_u64();
    return r % n;
  }

 private:
  std::uint64_t state_ = 0;
};

}  // namespace pbsi
