#pragma once

#include <cstdint>

namespace shapelab {

// splitmix64: tiny, fast, and identical on every platform. std::mt19937 et al.
// would also be portable, but the distributions are not; this keeps every
// Monte-Carlo stream reproducible bit for bit.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  uint64_t state_;
};

// stable derivation of independent substream seeds
inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
  SplitMix64 g(seed ^ (0x632be59bd9b4e019ull * (stream + 1)));
  return g.next();
}

}  // namespace shapelab
