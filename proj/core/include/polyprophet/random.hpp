#pragma once

#include <cmath>
#include <cstdint>

namespace polyprophet {

// Deterministic seeded random source (xoshiro256++ seeded via splitmix64).
//
// Contract: identical (seed, stream) pairs yield identical sample sequences;
// distinct stream ids behave independently. Distribution transforms are
// implemented here instead of through std::*_distribution so replay is
// bit-stable for a given build.
class RandomSource {
 public:
  explicit RandomSource(uint64_t seed, uint64_t stream = 0)
      : seed_(seed), stream_(stream) {
    uint64_t z = seed ^ mix(stream ^ 0x9e3779b97f4a7c15ull);
    for (auto& s : state_) {
      z += 0x9e3779b97f4a7c15ull;
      s = mix(z);
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
      state_[0] = 0x106689d45497fdb5ull;
    }
  }

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }

  // Child source on an independent-behaving stream, derived deterministically
  // from this source's identity (not its consumption state).
  RandomSource fork(uint64_t tag) const {
    return RandomSource(seed_, mix(stream_ + 0x632be59bd9b4e019ull * (tag + 1)));
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  double exponential(double rate) { return -std::log1p(-next_double()) / rate; }

  // Uniform integer in [0, n), n >= 1. Rejection-free modulo bias is
  // irrelevant at the sample counts used here, but reject anyway to keep
  // sequences portable across future tweaks.
  uint64_t next_below(uint64_t n) {
    const uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  // splitmix64 finalizer
  static uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  uint64_t seed_;
  uint64_t stream_;
  uint64_t state_[4];
};

}  // namespace polyprophet
