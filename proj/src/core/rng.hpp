#pragma once

#include <cstdint>

namespace qsw {

// splitmix64 step; used to expand seeds and derive substream seeds.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Fixed stream-splitting rule: substream `stream` of a master seed. Link-state
// draws, request arrivals and LLE arrivals each get their own stream so the
// processes are independent and individually reproducible.
inline uint64_t subSeed(uint64_t master, uint64_t stream) {
  uint64_t s = master ^ (0xD1B54A32D192ED03ull * (stream + 1));
  return splitmix64(s);
}

// xoshiro256** (Blackman/Vigna, public domain). Chosen over std distributions
// because the byte stream is identical on every platform, which the CSV
// determinism contract requires.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  uint64_t next() {
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

  // uniform double in [0, 1)
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

}  // namespace qsw
