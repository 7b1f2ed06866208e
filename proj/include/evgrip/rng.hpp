#pragma once

#include <cstdint>

namespace evgrip {

// splitmix64 step; also used to derive sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t s = seed ^ (0x632be59bd9b4e019ULL * (tag + 1));
  return splitmix64(s);
}

// Deterministic hash of a (seed, x, y) triple to [0,1). Used for procedural
// textures; must be identical across platforms, so no std:: distributions.
inline double hash01(std::uint64_t seed, std::int64_t x, std::int64_t y) {
  std::uint64_t s = seed;
  s ^= static_cast<std::uint64_t>(x) * 0x9e3779b97f4a7c15ULL;
  s ^= static_cast<std::uint64_t>(y) * 0xc2b2ae3d27d4eb4fULL;
  std::uint64_t r = splitmix64(s);
  return static_cast<double>(r >> 11) * 0x1.0p-53;
}

// xoshiro256++ with portable, implementation-independent derived draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
  }

  std::uint64_t next() {
    auto rotl = [](std::uint64_t v, int k) {
      return (v << k) | (v >> (64 - k));
    };
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // [0,1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // [0,n)
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) return 0;
    // modulo bias is irrelevant at our ranges (n << 2^64)
    return next() % n;
  }

  bool coin() { return (next() & 1) != 0; }

  std::uint64_t poisson(double lambda);

 private:
  std::uint64_t state_[4];
};

}  // namespace evgrip
