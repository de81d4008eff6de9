#pragma once

#include <cstdint>
#include <vector>

namespace botsim {

// All randomness in the library flows through this generator. The standard
// library distributions are implementation-defined, which would break the
// bit-reproducibility contract, so uniform/normal draws are done by hand.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double next_double();

  // Uniform integer in [0, n), unbiased. n must be > 0.
  uint64_t next_below(uint64_t n);

  // Zero-mean gaussian via Box-Muller, one independent draw per call.
  double normal(double sigma);

 private:
  uint64_t s_[4];
};

// Stream derivation: hashes the inputs into an independent seed so that
// e.g. per-(sensor, tick) noise streams never alias.
uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c = 0x9e3779b97f4a7c15ull);

// Deterministic Fisher-Yates.
template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng.next_below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace botsim
