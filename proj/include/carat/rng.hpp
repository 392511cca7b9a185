#pragma once

#include <cstdint>

namespace carat {

// splitmix64: tiny, seedable, identical across platforms. std:: distributions are
// not bit-reproducible between standard libraries, so all randomness goes through this.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d4a2135df058ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1) with 53 bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in [lo,hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // derived stream, independent of draws on this one
  SplitMix64 split(std::uint64_t tag) const { return SplitMix64(state_ ^ (0xd1342543de82ef95ULL * (tag + 1))); }

private:
  std::uint64_t state_;
};

}  // namespace carat
