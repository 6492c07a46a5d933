#pragma once

// Deterministic pseudorandom assignment of lines and blocks to ranks.
//
// Lines of a slice are numbered in layout order, scrambled by a keyed
// permutation and cut into contiguous chunks, one per rank.  Each block picks
// one of its four lines with a counter-based generator and belongs to that
// line's owner.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pentago/layout.h"

namespace pentago {

struct PartitionSeed {
  std::array<uint64_t, 4> key{};

  // Leading hex digits of pi.
  static PartitionSeed default_seed();
  // Up to 64 hex digits; shorter strings are zero padded on the left.
  static PartitionSeed parse(const std::string& hex);
  std::string hex() const;
  bool operator==(const PartitionSeed&) const = default;
};

// Keyed bijection on [0, n): cycle-walking 4-round Feistel network.
uint64_t permute(const PartitionSeed& seed, uint64_t n, uint64_t i, bool inverse = false);

// Threefry-2x64 with 20 rounds.
std::array<uint64_t, 2> threefry2x64(std::array<uint64_t, 2> counter, std::array<uint64_t, 2> key);

class Partition {
 public:
  Partition(const PartitionSeed& seed, int slice, int ranks);

  int slice() const { return layout_.slice(); }
  int ranks() const { return ranks_; }
  const SliceLayout& layout() const { return layout_; }

  int line_owner(const LineId& line) const;
  // Lines of rank r in scrambled order.
  uint64_t line_count(int rank) const { return chunk_start(rank + 1) - chunk_start(rank); }
  LineId rank_line(int rank, uint64_t j) const;
  std::vector<LineId> lines_of_rank(int rank) const;

  // The line a block is attached to, and its owner.
  LineId block_line(const BlockId& block) const;
  int block_owner(const BlockId& block) const { return line_owner(block_line(block)); }

  // Rank holding a position of the scrambled line order.
  int position_owner(uint64_t position) const;

 private:
  uint64_t chunk_start(int rank) const;

  PartitionSeed seed_;
  SliceLayout layout_;
  int ranks_;
};

struct BalanceReport {
  int slice = 0;
  int ranks = 0;
  std::array<uint64_t, 4> min{}, max{};  // blocks, lines, supers, line work
  bool degenerate = false;               // some rank owns nothing
  double ratio(int i) const { return min[i] ? double(max[i]) / double(min[i]) : 0.0; }
};

inline constexpr const char* kBalanceNames[4] = {"blocks", "lines", "supers", "work"};

// Work of a line: supers times empty cells of the quadrant along it.
uint64_t line_work(const LineId& line);
BalanceReport partition_stats(const PartitionSeed& seed, int slice, int ranks);

}  // namespace pentago
