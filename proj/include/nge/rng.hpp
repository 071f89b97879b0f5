#pragma once

#include <cstdint>

namespace nge {

// SplitMix64 (Steele, Lea, Flood 2014). Chosen over std::mt19937_64 because
// the whole pipeline must be bit-reproducible across platforms and the
// standard distributions are implementation-defined. Substreams derived via
// substream() are independent enough for dataset generation.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) {
      return 0;
    }
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r = next();
    while (r >= limit) {
      r = next();
    }
    return r % n;
  }

  // Uniform double in [0, 1) with 53 significant bits.
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double next_range(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  // Derives the seed of substream `index` of stream `seed`. Documented
  // formula; changing it changes every generated dataset.
  static std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    return mixer.next();
  }

 private:
  std::uint64_t state_;
};

}  // namespace nge
