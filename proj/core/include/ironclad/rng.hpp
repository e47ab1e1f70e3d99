#pragma once

#include <cmath>
#include <cstdint>

namespace ironclad {

// Repo-wide PRNG: xoshiro256** seeded through SplitMix64.
// Fixed here once so that every seeded result is bit-reproducible across
// platforms; <random> distributions are implementation-defined and banned
// from library code.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x);
  }

  // Derives an independent stream, e.g. per worker or per run index.
  static Rng substream(uint64_t seed, uint64_t index) {
    uint64_t x = seed;
    uint64_t a = splitmix64(x);
    x = index + 0x9e3779b97f4a7c15ULL;
    uint64_t b = splitmix64(x);
    return Rng(a ^ (b + 0x632be59bd9b4e019ULL));
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_u01() < p; }

  // Uniform integer in [0, n).
  uint64_t next_below(uint64_t n) { return next_u64() % n; }

  // Gap of a per-slot Bernoulli(p) arrival process: G >= 1 with
  // P(G = g) = (1-p)^(g-1) p, via inverse CDF.  Exact for p = 1.
  uint64_t geometric_gap(double p) {
    if (p >= 1.0) return 1;
    double u = next_u01();
    if (u <= 0.0) u = 0x1.0p-53;
    const double g = std::floor(std::log(u) / std::log1p(-p));
    return 1 + static_cast<uint64_t>(g);
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t s_[4];
};

}  // namespace ironclad
