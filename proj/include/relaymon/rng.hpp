#ifndef RELAYMON_RNG_HPP
#define RELAYMON_RNG_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace relaymon {

// splitmix64 step; used both as a mixer and to derive child seeds.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d4a2c62d4bd8b2ull;
  return z ^ (z >> 31);
}

// Deterministic child seed from a master seed and a stream index.
// Every stochastic sub-run (trial, match, grid job) gets its own stream.
inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
  uint64_t s = master ^ (0x517cc1b727220a95ull * (stream + 1));
  uint64_t a = splitmix64(s);
  uint64_t b = splitmix64(s);
  return a ^ (b << 1);
}

// Thin wrapper so all sampling goes through one audited path.
// Categorical draws use explicit inverse-CDF walks: stable across
// standard-library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  double uniform01() {
    // 53-bit mantissa draw in [0,1)
    return (engine_() >> 11) * 0x1.0p-53;
  }

  uint64_t next_u64() { return engine_(); }

  // Index into `probs` by inverse CDF; final index absorbs rounding slack.
  int categorical(std::span<const double> probs) {
    double u = uniform01();
    double acc = 0.0;
    for (size_t j = 0; j + 1 < probs.size(); ++j) {
      acc += probs[j];
      if (u < acc) return static_cast<int>(j);
    }
    return static_cast<int>(probs.size()) - 1;
  }

  int categorical(const std::vector<double>& probs) {
    return categorical(std::span<const double>(probs));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace relaymon

#endif
