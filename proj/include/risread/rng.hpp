#pragma once

#include <cmath>
#include <cstdint>

// Self-contained counter-seeded RNG so that results are bit-identical across
// platforms and worker counts. Standard-library distributions are
// implementation-defined and would break replay, so sampling is done here.

namespace risread::rng {

// splitmix64 finalizer; good avalanche, used for seed derivation only.
constexpr uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Combine two words into a well-mixed seed. Chain for more words.
constexpr uint64_t derive(uint64_t a, uint64_t b) {
  return mix64(a ^ (0x632be59bd9b4e019ull * (b + 0x9e3779b97f4a7c15ull)));
}

// Seed for one logical stream. Lanes keep draws for different purposes
// (symbol choice, per-mode detectors) statistically independent per trial.
constexpr uint64_t stream_seed(uint64_t master, uint64_t grid, uint64_t trial,
                               uint64_t lane) {
  return derive(derive(derive(master, grid), trial), lane);
}

inline constexpr uint64_t kLaneSymbol = 0;   // true-symbol draw
inline constexpr uint64_t kLaneNoise = 1;    // heterodyne noise
inline constexpr uint64_t kLaneMode0 = 2;    // detector stream for mode s is kLaneMode0 + s

// xoshiro256++ (Blackman & Vigna, public domain reference implementation).
class Stream {
 public:
  explicit Stream(uint64_t seed) {
    uint64_t x = seed;
    for (auto& w : s_) {
      x = mix64(x);
      w = x;
    }
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on the open interval (0,1); never returns 0 or 1, so logs are safe.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Inverse-CDF exponential draw; caller guarantees rate > 0.
  double exponential(double rate) { return -std::log(uniform01()) / rate; }

  // Standard normal pair via Box-Muller on inverse-CDF uniforms.
  void gaussian_pair(double& z0, double& z1) {
    const double r = std::sqrt(-2.0 * std::log(uniform01()));
    const double th = 6.283185307179586476925286766559 * uniform01();
    z0 = r * std::cos(th);
    z1 = r * std::sin(th);
  }

  // Uniform integer in [0,n) via 128-bit multiply (bias ~ n/2^64, negligible).
  uint64_t bounded(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  static constexpr uint64_t rotl(uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  uint64_t s_[4];
};

}  // namespace risread::rng
