#include <random>
#include <set>

#include "doctest.h"
#include "pentago/partition.h"

using namespace pentago;

TEST_CASE("threefry known answers") {
  CHECK(threefry2x64({0, 0}, {0, 0}) == std::array<uint64_t, 2>{0xc2b6e3a8c2c69865ull, 0x6f81ed42f350084dull});
  CHECK(threefry2x64({~0ull, ~0ull}, {~0ull, ~0ull}) ==
        std::array<uint64_t, 2>{0xe02cb7c4d95d277aull, 0xd06633d0893b8b68ull});
  CHECK(threefry2x64({0x243f6a8885a308d3ull, 0x13198a2e03707344ull}, {0xa4093822299f31d0ull, 0x082efa98ec4e6c89ull}) ==
        std::array<uint64_t, 2>{0x263c7d30bb0f0af1ull, 0x56be8361d3311526ull});
}

TEST_CASE("seed text form") {
  const PartitionSeed d = PartitionSeed::default_seed();
  CHECK(PartitionSeed::parse(d.hex()) == d);
  CHECK(PartitionSeed::parse("1").key == std::array<uint64_t, 4>{0, 0, 0, 1});
  CHECK_THROWS_AS(PartitionSeed::parse("xyz"), Error);
}

TEST_CASE("permute is a bijection") {
  CHECK(permute(PartitionSeed::default_seed(), 1, 0) == 0);
  CHECK_THROWS_AS(permute(PartitionSeed::default_seed(), 5, 5), Error);
  std::mt19937_64 rng(31);
  for (int s = 0; s < 10; s++) {
    PartitionSeed seed;
    for (auto& k : seed.key) k = rng();
    for (uint64_t n : {1ull, 2ull, 3ull, 4ull, 5ull, 17ull, 255ull, 256ull, 1000ull, 65537ull, 1000000ull}) {
      std::vector<bool> hit(n);
      uint64_t fixed = 0;
      for (uint64_t i = 0; i < n; i++) {
        const uint64_t p = permute(seed, n, i);
        REQUIRE(p < n);
        REQUIRE(!hit[p]);
        hit[p] = true;
        REQUIRE(permute(seed, n, p, true) == i);
        fixed += p == i;
      }
      if (n >= 1000) CHECK(fixed < n / 100);
    }
  }
}

TEST_CASE("line ownership") {
  const PartitionSeed seed = PartitionSeed::default_seed();
  for (int slice : {3, 5, 9}) {
    const Partition one(seed, slice, 1);
    for (uint64_t n = 0; n < one.layout().lines(); n++) CHECK(one.line_owner(one.layout().line(n)) == 0);
    for (int ranks : {2, 3, 7, 72}) {
      const Partition p(seed, slice, ranks);
      uint64_t lo = UINT64_MAX, hi = 0, total = 0;
      std::set<uint64_t> seen;
      for (int r = 0; r < ranks; r++) {
        lo = std::min(lo, p.line_count(r));
        hi = std::max(hi, p.line_count(r));
        for (const LineId& l : p.lines_of_rank(r)) {
          REQUIRE(p.line_owner(l) == r);
          seen.insert(p.layout().line_number(l));
          total++;
        }
      }
      CHECK(hi - lo <= 1);
      CHECK(total == p.layout().lines());
      CHECK(seen.size() == total);
    }
  }
}

TEST_CASE("block ownership") {
  const PartitionSeed seed = PartitionSeed::default_seed();
  const Partition p(seed, 9, 8), again(seed, 9, 8), one(seed, 9, 1);
  std::mt19937_64 rng(32);
  std::array<int, 4> dims{};
  for (int it = 0; it < 100000; it++) {
    const BlockId b = p.layout().block(rng() % p.layout().blocks());
    const LineId l = p.block_line(b);
    dims[l.dim]++;
    // the chosen line passes through the block
    REQUIRE(l.section == b.section);
    for (int i = 0; i < 4; i++)
      if (i != l.dim) REQUIRE(l.block[i] == b.block[i]);
    REQUIRE(b.block[l.dim] < line_length(l));
    REQUIRE(p.block_owner(b) == again.block_owner(b));
    REQUIRE(p.block_owner(b) == p.line_owner(l));
    REQUIRE(one.block_owner(b) == 0);
  }
  for (int d : dims) CHECK(d > 20000);
}

TEST_CASE("balance report matches direct enumeration") {
  const PartitionSeed seed = PartitionSeed::default_seed();
  for (int slice : {4, 6}) {
    const Partition p(seed, slice, 2);
    std::array<std::array<uint64_t, 4>, 2> per{};
    for (uint64_t n = 0; n < p.layout().blocks(); n++) {
      const BlockId b = p.layout().block(n);
      per[p.block_owner(b)][0]++;
      per[p.block_owner(b)][2] += block_supers(b);
    }
    for (uint64_t n = 0; n < p.layout().lines(); n++) {
      const LineId l = p.layout().line(n);
      per[p.line_owner(l)][1]++;
      per[p.line_owner(l)][3] += line_work(l);
    }
    const BalanceReport rep = partition_stats(seed, slice, 2);
    for (int i = 0; i < 4; i++) {
      CHECK(rep.min[i] == std::min(per[0][i], per[1][i]));
      CHECK(rep.max[i] == std::max(per[0][i], per[1][i]));
    }
  }
  const int lines = int(SliceLayout(3).lines());
  const BalanceReport deg = partition_stats(seed, 3, lines);
  CHECK(deg.degenerate);
  CHECK(deg.min[1] == 1);
  CHECK(deg.max[1] == 1);
}
