#include <doctest.h>

#include <cstdint>
#include <set>

#include "nge/rng.hpp"

using nge::SplitMix64;

TEST_CASE("splitmix64 matches the published reference sequence") {
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next() == 0x06C45D188009454FULL);
}

TEST_CASE("identical seeds give identical streams") {
  SplitMix64 a(0xDEADBEEF), b(0xDEADBEEF);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next() == b.next());
  }
}

TEST_CASE("next_below stays in range and hits every bucket") {
  SplitMix64 rng(42);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t v = rng.next_below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  CHECK(rng.next_below(0) == 0);
  CHECK(rng.next_below(1) == 0);
}

TEST_CASE("next_unit lies in [0,1) and is not degenerate") {
  SplitMix64 rng(7);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 1000; ++i) {
    double u = rng.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.1);
  CHECK(hi > 0.9);
}

TEST_CASE("substream seeds differ per index and are reproducible") {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 50; ++i) {
    seeds.insert(SplitMix64::substream_seed(123, i));
  }
  CHECK(seeds.size() == 50);
  CHECK(SplitMix64::substream_seed(123, 3) == SplitMix64::substream_seed(123, 3));
  CHECK(SplitMix64::substream_seed(123, 3) != SplitMix64::substream_seed(124, 3));
}
