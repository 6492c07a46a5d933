#pragma once

// Slice-by-slice retrograde solve.  A coordinator runs one slice at a time on N
// worker threads that exchange messages only: line owners request the child
// blocks of a line from their owners, compute it, and scatter the resulting
// parent blocks to the parent block owners, who merge them.  Every worker
// announces the end of its lines with a barrier message to all workers and
// leaves the slice once it has the barrier of every worker.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "pentago/block_store.h"
#include "pentago/boundary.h"
#include "pentago/codec.h"
#include "pentago/layout.h"
#include "pentago/partition.h"
#include "pentago/store.h"

namespace pentago {

// Supers needed to solve every position reachable from a root by adding stones
// (in any rotation), slice by slice.
struct SubgameDomain {
  Board root;
  std::array<std::set<std::pair<int, Index4>>, 37> needed;  // (section, index) per slice

  bool contains(int slice, int section, const Index4& index) const {
    return needed[slice].count({section, index}) != 0;
  }
};

// Boards obtained from root by filling some of its empty cells, with the stone
// counts of slice k.
std::vector<Board> supported_boards(Board root, int k);
// Throws TreeTooLarge when more than limit boards would be enumerated.
SubgameDomain subgame_domain(Board root, uint64_t limit = uint64_t(1) << 22);

struct EngineConfig {
  int workers = 1;
  int ranks = 1;
  PartitionSeed seed = PartitionSeed::default_seed();
  Codec codec = Codec::zlib;
  int max_in_flight = 5;           // lines per worker
  std::string store_dir;           // written per slice when set
  uint64_t memory_budget = uint64_t(1) << 30;
  int samples = 256;
  double idle_timeout = 300;       // seconds without a message before reporting a deadlock
  bool keep_slices = false;        // return every computed slice, not just the last
  const SubgameDomain* subgame = nullptr;
};

struct SliceReport {
  int slice = 0;
  uint64_t lines = 0;
  uint64_t blocks = 0;
  uint64_t messages = 0;
  uint64_t arena_bytes = 0;  // before compaction
  uint64_t live_bytes = 0;
  double seconds = 0;
};

struct SolveResult {
  std::vector<CountsRecord> counts;
  std::map<int, std::vector<Sample>> samples;
  std::vector<SliceReport> reports;
  std::map<int, std::vector<PackedBlock>> slices;  // sorted by block
};

// Bytes held while computing slice n: n and its child slice, uncompressed.
uint64_t slice_memory_estimate(int n, const SubgameDomain* subgame = nullptr);

// Computes slices from-1 down to to.  The terminal boundary starts at 36; an
// injected boundary materializes slice from.
SolveResult solve(int from, int to, const BoundarySpec& boundary, const EngineConfig& config);

// Random access to the values of one solved slice.  A caller-supplied fetch is
// called for every lookup; the other constructors keep decoded blocks.
class SolvedSlice {
 public:
  using Block = std::shared_ptr<const std::vector<SuperValue>>;
  using Fetch = std::function<Block(const BlockId&)>;

  SolvedSlice(int slice, Fetch fetch) : slice_(slice), fetch_(std::move(fetch)) {}
  SolvedSlice(int slice, const std::vector<PackedBlock>& blocks);
  explicit SolvedSlice(std::shared_ptr<SliceReader> reader);

  int slice() const { return slice_; }
  SuperValue super(int section, const Index4& index) const;
  // Value of l·b at bit l, for a board b of this slice.
  SuperValue super_of(Board b) const;
  Value value(Board b) const { return super_of(b).at(0); }

 private:
  static Fetch memoized(Fetch fetch);

  int slice_;
  Fetch fetch_;
};

}  // namespace pentago
