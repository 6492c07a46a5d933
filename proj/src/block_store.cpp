#include "pentago/block_store.h"

namespace pentago {

std::vector<SuperValue> merge_block(std::span<const SuperValue> existing, std::span<const SuperValue> incoming) {
  if (existing.size() != incoming.size())
    throw Error(Errc::shape_mismatch, "merging blocks of " + std::to_string(existing.size()) + " and " +
                                          std::to_string(incoming.size()) + " supers");
  std::vector<SuperValue> out(existing.size());
  for (size_t i = 0; i < out.size(); i++) out[i] = merge_value(existing[i], incoming[i]);
  return out;
}

uint8_t expected_contributions(const Section& s) {
  uint8_t mask = 0;
  for (int q = 0; q < 4; q++)
    if (s.counts[q][0] + s.counts[q][1] < 9) mask |= uint8_t(1 << q);
  return mask;
}

const BlockStore::Entry& BlockStore::entry(const BlockId& id) const {
  auto it = blocks_.find(id);
  if (it == blocks_.end()) throw Error(Errc::block_not_found, to_string(id));
  return it->second;
}

void BlockStore::store(Entry& e, std::span<const SuperValue> supers) {
  const auto raw = encode_block(supers);
  const auto packed = compress(codec_, raw);
  live_ -= e.packed_size;
  e.offset = arena_.size();
  e.packed_size = uint32_t(packed.size());
  e.raw_size = uint32_t(raw.size());
  arena_.insert(arena_.end(), packed.begin(), packed.end());
  live_ += e.packed_size;
}

void BlockStore::put(const BlockId& id, std::span<const SuperValue> supers) {
  if (id.slice != slice_) throw Error(Errc::invalid_argument, "block from another slice");
  if (supers.size() != size_t(block_supers(id))) throw Error(Errc::shape_mismatch, to_string(id));
  if (blocks_.count(id)) throw Error(Errc::duplicate_contribution, to_string(id) + " installed twice");
  Entry& e = blocks_[id];
  e.expected = e.received = 0;
  store(e, supers);
}

void BlockStore::contribute(const BlockId& id, int dim, std::span<const SuperValue> supers) {
  if (id.slice != slice_) throw Error(Errc::invalid_argument, "block from another slice");
  if (supers.size() != size_t(block_supers(id))) throw Error(Errc::shape_mismatch, to_string(id));
  const uint8_t expected = expected_contributions(sections_of_slice(slice_)[id.section]);
  if (!(expected >> dim & 1)) throw Error(Errc::dimension_mismatch, to_string(id) + " has no children along axis " + std::to_string(dim));
  auto it = blocks_.find(id);
  if (it == blocks_.end()) {
    Entry& e = blocks_[id];
    e.expected = expected;
    e.received = uint8_t(1 << dim);
    store(e, supers);
    return;
  }
  Entry& e = it->second;
  if (e.received >> dim & 1)
    throw Error(Errc::duplicate_contribution, to_string(id) + " already has the axis " + std::to_string(dim) + " line");
  const auto merged = merge_block(decode_block(decompress(codec_, bytes(e), e.raw_size)), supers);
  e.received |= uint8_t(1 << dim);
  store(e, merged);
}

bool BlockStore::complete(const BlockId& id) const {
  auto it = blocks_.find(id);
  return it != blocks_.end() && it->second.received == it->second.expected;
}

void BlockStore::check_complete() const {
  for (auto& [id, e] : blocks_)
    if (e.received != e.expected) throw Error(Errc::incomplete_block, to_string(id) + " is missing contributions");
}

PackedBlock BlockStore::packed(const BlockId& id) const {
  const Entry& e = entry(id);
  if (e.received != e.expected) throw Error(Errc::incomplete_block, to_string(id) + " is not readable yet");
  const auto b = bytes(e);
  return PackedBlock{id, codec_, e.raw_size, {b.begin(), b.end()}};
}

std::vector<SuperValue> BlockStore::read(const BlockId& id) const {
  const PackedBlock p = packed(id);
  return decode_block(decompress(p.codec, p.data, p.raw_size));
}

std::vector<BlockId> BlockStore::ids() const {
  std::vector<BlockId> out;
  for (auto& kv : blocks_) out.push_back(kv.first);
  return out;
}

void BlockStore::compact() {
  std::vector<uint8_t> fresh;
  fresh.reserve(live_);
  for (auto& [id, e] : blocks_) {
    const auto b = bytes(e);
    const uint64_t offset = fresh.size();
    fresh.insert(fresh.end(), b.begin(), b.end());
    e.offset = offset;
  }
  arena_.swap(fresh);
}

}  // namespace pentago
