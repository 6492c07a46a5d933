#pragma once

// Compressed in-memory blocks of one slice owned by one rank.  Blocks are
// assembled from up to four line contributions, one per axis with children.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "pentago/codec.h"
#include "pentago/layout.h"
#include "pentago/store.h"
#include "pentago/super.h"

namespace pentago {

// Per-super merge; both sides must have the same shape.
std::vector<SuperValue> merge_block(std::span<const SuperValue> existing, std::span<const SuperValue> incoming);

// Axes of a section whose quadrant still has an empty cell: the axes whose
// lines contribute to every block of the section.
uint8_t expected_contributions(const Section& s);

class BlockStore {
 public:
  BlockStore(int slice, Codec codec) : slice_(slice), codec_(codec) {}

  int slice() const { return slice_; }
  Codec codec() const { return codec_; }

  // Installs a finished block (boundary data).
  void put(const BlockId& id, std::span<const SuperValue> supers);
  // Merges the contribution of the line along dim.
  void contribute(const BlockId& id, int dim, std::span<const SuperValue> supers);

  bool contains(const BlockId& id) const { return blocks_.count(id) != 0; }
  bool complete(const BlockId& id) const;
  // Throws IncompleteBlock naming the first unfinished block.
  void check_complete() const;

  // Compressed bytes of a complete block.
  PackedBlock packed(const BlockId& id) const;
  std::vector<SuperValue> read(const BlockId& id) const;
  std::vector<BlockId> ids() const;

  // Rewrites the arena with live payloads only, in block order.
  void compact();
  size_t arena_bytes() const { return arena_.size(); }
  size_t live_bytes() const { return live_; }

 private:
  struct Entry {
    uint64_t offset = 0;
    uint32_t packed_size = 0;
    uint32_t raw_size = 0;
    uint8_t received = 0;
    uint8_t expected = 0;
  };

  const Entry& entry(const BlockId& id) const;
  void store(Entry& e, std::span<const SuperValue> supers);
  std::span<const uint8_t> bytes(const Entry& e) const { return {arena_.data() + e.offset, e.packed_size}; }

  int slice_;
  Codec codec_;
  std::map<BlockId, Entry> blocks_;
  std::vector<uint8_t> arena_;
  size_t live_ = 0;
};

}  // namespace pentago
