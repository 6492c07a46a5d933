#pragma once

// Solution files: one file per slice, random access to single blocks.  The byte
// layout is described in docs/format.md.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "pentago/codec.h"
#include "pentago/layout.h"
#include "pentago/super.h"

namespace pentago {

inline constexpr uint32_t kFormatVersion = 1;
inline constexpr size_t kHeaderBytes = 40;
inline constexpr size_t kSectionEntryBytes = 16;
inline constexpr size_t kIndexEntryBytes = 40;
inline constexpr size_t kSampleBytes = 72;

// CRC-64/XZ (reflected polynomial 0x42F0E1EBA9EA3693, init and xorout all ones).
uint64_t crc64(std::span<const uint8_t> bytes);

struct PackedBlock {
  BlockId id;
  Codec codec = Codec::identity;
  uint32_t raw_size = 0;
  std::vector<uint8_t> data;
};

// Raw block bytes: supers in lexicographic order of the local coordinates,
// 64 bytes each.
std::vector<uint8_t> encode_block(std::span<const SuperValue> supers);
std::vector<SuperValue> decode_block(std::span<const uint8_t> raw);

void write_slice(const std::string& path, int slice, std::vector<PackedBlock> blocks);

class ByteSource {
 public:
  virtual ~ByteSource() = default;
  virtual uint64_t size() = 0;
  virtual std::vector<uint8_t> read(uint64_t offset, uint64_t length) = 0;
};

std::shared_ptr<ByteSource> open_file(const std::string& path);
// http://host[:port]/path, fetched with byte-range requests.
std::shared_ptr<ByteSource> open_http(const std::string& url);
// A path or an http URL.
std::shared_ptr<ByteSource> open_source(const std::string& location);

class CountingSource : public ByteSource {
 public:
  explicit CountingSource(std::shared_ptr<ByteSource> inner) : inner_(std::move(inner)) {}
  uint64_t size() override { return inner_->size(); }
  std::vector<uint8_t> read(uint64_t offset, uint64_t length) override;
  uint64_t bytes() const { return bytes_; }
  uint64_t requests() const { return requests_; }
  void reset() { bytes_ = requests_ = 0; }

 private:
  std::shared_ptr<ByteSource> inner_;
  uint64_t bytes_ = 0, requests_ = 0;
};

struct IndexEntry {
  BlockId id;
  uint64_t offset = 0;
  uint32_t packed_size = 0;
  uint32_t raw_size = 0;
  Codec codec = Codec::identity;
  uint64_t crc = 0;
};

// Reads the header and index once; every block read afterwards touches only
// that block's byte range.
class SliceReader {
 public:
  explicit SliceReader(std::shared_ptr<ByteSource> source);

  int slice() const { return slice_; }
  size_t metadata_bytes() const { return metadata_bytes_; }
  const std::vector<IndexEntry>& index() const { return index_; }
  const IndexEntry* find(const BlockId& id) const;
  bool has(const BlockId& id) const { return find(id) != nullptr; }

  std::vector<uint8_t> read_raw(const BlockId& id) const;
  std::vector<SuperValue> read_block(const BlockId& id) const;
  // Checks every payload checksum; returns the number of blocks.
  size_t verify() const;

 private:
  std::shared_ptr<ByteSource> source_;
  int slice_ = 0;
  size_t metadata_bytes_ = 0;
  std::vector<IndexEntry> index_;
};

std::vector<SuperValue> read_block(std::shared_ptr<ByteSource> source, const BlockId& id);

struct CountsRecord {
  int slice = 0;
  uint64_t supers = 0, win = 0, tie = 0, loss = 0;
  bool operator==(const CountsRecord&) const = default;
};

struct Sample {
  Board board;
  SuperValue value;
  bool operator==(const Sample&) const = default;
};

void write_counts(const std::string& path, const std::vector<CountsRecord>& records);
std::vector<CountsRecord> read_counts(const std::string& path);
void write_samples(const std::string& path, const std::vector<Sample>& samples);
std::vector<Sample> read_samples(const std::string& path);

std::string slice_file_name(int slice);
std::string samples_file_name(int slice);
inline constexpr const char* kCountsFileName = "counts.txt";

}  // namespace pentago
