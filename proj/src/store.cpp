#include "pentago/store.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <boost/crc.hpp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "httplib.h"

namespace pentago {
namespace {

constexpr char kMagic[8] = {'S', 'P', 'G', 'O', '1', 0, 0, 0};

void put(std::vector<uint8_t>& out, uint64_t v, int bytes) {
  for (int i = 0; i < bytes; i++) out.push_back(uint8_t(v >> (8 * i)));
}

uint64_t get(const uint8_t* p, int bytes) {
  uint64_t v = 0;
  for (int i = 0; i < bytes; i++) v |= uint64_t(p[i]) << (8 * i);
  return v;
}

class FileSource : public ByteSource {
 public:
  explicit FileSource(const std::string& path) : path_(path) {
    fd_ = ::open(path.c_str(), O_RDONLY);
    if (fd_ < 0) throw Error(Errc::unavailable, "cannot open " + path);
  }
  ~FileSource() override { ::close(fd_); }
  uint64_t size() override {
    const off_t end = ::lseek(fd_, 0, SEEK_END);
    if (end < 0) throw Error(Errc::io_error, "cannot size " + path_);
    return uint64_t(end);
  }
  std::vector<uint8_t> read(uint64_t offset, uint64_t length) override {
    std::vector<uint8_t> out(length);
    uint64_t done = 0;
    while (done < length) {
      const ssize_t n = ::pread(fd_, out.data() + done, length - done, off_t(offset + done));
      if (n <= 0) throw Error(Errc::io_error, "short read from " + path_);
      done += uint64_t(n);
    }
    return out;
  }

 private:
  std::string path_;
  int fd_ = -1;
};

class HttpSource : public ByteSource {
 public:
  explicit HttpSource(const std::string& url) {
    const std::string scheme = "http://";
    if (url.rfind(scheme, 0) != 0) throw Error(Errc::invalid_argument, "only http URLs are supported: " + url);
    const size_t slash = url.find('/', scheme.size());
    host_ = url.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : url.substr(slash);
    client_ = std::make_unique<httplib::Client>(host_);
    client_->set_connection_timeout(5);
    client_->set_read_timeout(30);
  }
  uint64_t size() override {
    std::lock_guard lock(mu_);
    auto res = client_->Head(path_);
    if (!res) throw Error(Errc::unavailable, "no response from " + host_);
    if (res->status == 404) throw Error(Errc::block_not_found, host_ + path_ + " does not exist");
    if (res->status != 200) throw Error(Errc::unavailable, "HEAD " + path_ + " returned " + std::to_string(res->status));
    return std::stoull(res->get_header_value("Content-Length"));
  }
  std::vector<uint8_t> read(uint64_t offset, uint64_t length) override {
    if (!length) return {};
    std::lock_guard lock(mu_);
    const std::string range = "bytes=" + std::to_string(offset) + "-" + std::to_string(offset + length - 1);
    auto res = client_->Get(path_, {{"Range", range}});
    if (!res) throw Error(Errc::unavailable, "no response from " + host_);
    if (res->status == 404) throw Error(Errc::block_not_found, host_ + path_ + " does not exist");
    if (res->status == 200 && res->body.size() >= offset + length)
      return {res->body.begin() + long(offset), res->body.begin() + long(offset + length)};
    if (res->status != 206 || res->body.size() != length)
      throw Error(Errc::unavailable, "range request " + range + " returned " + std::to_string(res->status));
    return {res->body.begin(), res->body.end()};
  }

 private:
  std::mutex mu_;
  std::string host_, path_;
  std::unique_ptr<httplib::Client> client_;
};

}  // namespace

uint64_t crc64(std::span<const uint8_t> bytes) {
  boost::crc_optimal<64, 0x42F0E1EBA9EA3693ull, ~0ull, ~0ull, true, true> crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

std::vector<uint8_t> encode_block(std::span<const SuperValue> supers) {
  std::vector<uint8_t> out(supers.size() * kSuperBytes);
  for (size_t i = 0; i < supers.size(); i++) write_super(supers[i], std::span<uint8_t, kSuperBytes>(out.data() + i * kSuperBytes, kSuperBytes));
  return out;
}

std::vector<SuperValue> decode_block(std::span<const uint8_t> raw) {
  if (raw.size() % kSuperBytes) throw Error(Errc::shape_mismatch, "block length is not a multiple of 64");
  std::vector<SuperValue> out(raw.size() / kSuperBytes);
  for (size_t i = 0; i < out.size(); i++)
    out[i] = read_super(std::span<const uint8_t, kSuperBytes>(raw.data() + i * kSuperBytes, kSuperBytes));
  return out;
}

void write_slice(const std::string& path, int slice, std::vector<PackedBlock> blocks) {
  const auto& sections = sections_of_slice(slice);
  std::sort(blocks.begin(), blocks.end(), [](const PackedBlock& a, const PackedBlock& b) { return a.id < b.id; });
  for (size_t i = 1; i < blocks.size(); i++)
    if (blocks[i].id == blocks[i - 1].id) throw Error(Errc::duplicate_contribution, "block written twice: " + to_string(blocks[i].id));
  std::vector<uint8_t> meta;
  for (const Section& s : sections) {
    for (auto& c : s.counts) put(meta, c[0], 1), put(meta, c[1], 1);
    for (int d : section_shape(s)) put(meta, uint64_t(d), 2);
  }
  uint64_t offset = kHeaderBytes + sections.size() * kSectionEntryBytes + blocks.size() * kIndexEntryBytes;
  for (const PackedBlock& b : blocks) {
    if (b.id.slice != slice) throw Error(Errc::invalid_argument, "block from another slice");
    put(meta, uint64_t(b.id.section), 4);
    for (int c : b.id.block) put(meta, uint64_t(c), 1);
    put(meta, offset, 8);
    put(meta, b.data.size(), 4);
    put(meta, b.raw_size, 4);
    put(meta, uint64_t(b.codec), 1);
    put(meta, 0, 7);
    put(meta, crc64(b.data), 8);
    offset += b.data.size();
  }
  std::vector<uint8_t> header(kMagic, kMagic + 8);
  put(header, kFormatVersion, 4);
  put(header, uint64_t(slice), 4);
  put(header, sections.size(), 4);
  put(header, 0, 4);
  put(header, blocks.size(), 8);
  put(header, crc64(meta), 8);

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot write " + tmp);
    out.write(reinterpret_cast<const char*>(header.data()), std::streamsize(header.size()));
    out.write(reinterpret_cast<const char*>(meta.data()), std::streamsize(meta.size()));
    for (const PackedBlock& b : blocks) out.write(reinterpret_cast<const char*>(b.data.data()), std::streamsize(b.data.size()));
    if (!out) throw Error(Errc::io_error, "write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str())) throw Error(Errc::io_error, "cannot rename " + tmp);
}

std::shared_ptr<ByteSource> open_file(const std::string& path) { return std::make_shared<FileSource>(path); }

std::shared_ptr<ByteSource> open_http(const std::string& url) { return std::make_shared<HttpSource>(url); }

std::shared_ptr<ByteSource> open_source(const std::string& location) {
  if (location.rfind("http://", 0) == 0) return open_http(location);
  return open_file(location);
}

std::vector<uint8_t> CountingSource::read(uint64_t offset, uint64_t length) {
  requests_++;
  bytes_ += length;
  return inner_->read(offset, length);
}

SliceReader::SliceReader(std::shared_ptr<ByteSource> source) : source_(std::move(source)) {
  const auto header = source_->read(0, kHeaderBytes);
  if (std::memcmp(header.data(), kMagic, 8)) throw Error(Errc::invalid_argument, "not a solution file");
  if (get(&header[8], 4) != kFormatVersion) throw Error(Errc::invalid_argument, "unsupported format version");
  slice_ = int(get(&header[12], 4));
  if (slice_ < 0 || slice_ > 36) throw Error(Errc::invalid_argument, "bad slice in header");
  const uint64_t sections = get(&header[16], 4), blocks = get(&header[24], 8);
  const auto meta = source_->read(kHeaderBytes, sections * kSectionEntryBytes + blocks * kIndexEntryBytes);
  if (crc64(meta) != get(&header[32], 8)) throw Error(Errc::checksum_mismatch, "index checksum mismatch");
  metadata_bytes_ = kHeaderBytes + meta.size();
  const auto& expected = sections_of_slice(slice_);
  if (sections != expected.size()) throw Error(Errc::invalid_argument, "section table does not match this layout");
  for (size_t i = 0; i < sections; i++) {
    const uint8_t* p = &meta[i * kSectionEntryBytes];
    Section s;
    for (int q = 0; q < 4; q++) s.counts[q] = {p[2 * q], p[2 * q + 1]};
    if (s != expected[i]) throw Error(Errc::invalid_argument, "section table does not match this layout");
  }
  uint64_t end = metadata_bytes_;
  for (size_t i = 0; i < blocks; i++) {
    const uint8_t* p = &meta[sections * kSectionEntryBytes + i * kIndexEntryBytes];
    IndexEntry e;
    e.id.slice = slice_;
    e.id.section = int(get(p, 4));
    for (int d = 0; d < 4; d++) e.id.block[d] = p[4 + d];
    e.offset = get(p + 8, 8);
    e.packed_size = uint32_t(get(p + 16, 4));
    e.raw_size = uint32_t(get(p + 20, 4));
    e.codec = Codec(p[24]);
    e.crc = get(p + 32, 8);
    if (e.offset != end) throw Error(Errc::invalid_argument, "block offsets are not contiguous");
    if (!index_.empty() && !(index_.back().id < e.id)) throw Error(Errc::invalid_argument, "index is not sorted");
    end += e.packed_size;
    index_.push_back(e);
  }
}

const IndexEntry* SliceReader::find(const BlockId& id) const {
  auto it = std::lower_bound(index_.begin(), index_.end(), id, [](const IndexEntry& e, const BlockId& b) { return e.id < b; });
  return it != index_.end() && it->id == id ? &*it : nullptr;
}

std::vector<uint8_t> SliceReader::read_raw(const BlockId& id) const {
  const IndexEntry* e = find(id);
  if (!e) throw Error(Errc::block_not_found, to_string(id));
  const Codec codec = codec_from_id(uint8_t(e->codec));
  const auto packed = source_->read(e->offset, e->packed_size);
  if (crc64(packed) != e->crc) throw Error(Errc::checksum_mismatch, to_string(id));
  return decompress(codec, packed, e->raw_size);
}

std::vector<SuperValue> SliceReader::read_block(const BlockId& id) const { return decode_block(read_raw(id)); }

size_t SliceReader::verify() const {
  for (const IndexEntry& e : index_) {
    const auto raw = read_raw(e.id);
    if (raw.size() != size_t(block_supers(e.id)) * kSuperBytes) throw Error(Errc::shape_mismatch, to_string(e.id));
    for (const SuperValue& v : decode_block(raw))
      if (!v.well_formed()) throw Error(Errc::invalid_argument, "malformed value in " + to_string(e.id));
  }
  return index_.size();
}

std::vector<SuperValue> read_block(std::shared_ptr<ByteSource> source, const BlockId& id) {
  return SliceReader(std::move(source)).read_block(id);
}

void write_counts(const std::string& path, const std::vector<CountsRecord>& records) {
  std::ofstream out(path, std::ios::trunc);
  out << "# slice supers win tie loss\n";
  for (const CountsRecord& r : records)
    out << r.slice << ' ' << r.supers << ' ' << r.win << ' ' << r.tie << ' ' << r.loss << '\n';
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
}

std::vector<CountsRecord> read_counts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::unavailable, "cannot open " + path);
  std::vector<CountsRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    CountsRecord r;
    if (!(ss >> r.slice >> r.supers >> r.win >> r.tie >> r.loss)) throw Error(Errc::invalid_argument, "bad counts line: " + line);
    out.push_back(r);
  }
  return out;
}

void write_samples(const std::string& path, const std::vector<Sample>& samples) {
  std::vector<uint8_t> bytes;
  for (const Sample& s : samples) {
    put(bytes, s.board.key(), 8);
    std::array<uint8_t, kSuperBytes> v;
    write_super(s.value, v);
    bytes.insert(bytes.end(), v.begin(), v.end());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
}

std::vector<Sample> read_samples(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::unavailable, "cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() % kSampleBytes) throw Error(Errc::invalid_argument, "sample file length is not a multiple of 72");
  std::vector<Sample> out;
  for (size_t i = 0; i < bytes.size(); i += kSampleBytes) {
    Sample s;
    s.board = Board::from_key(get(&bytes[i], 8));
    s.value = read_super(std::span<const uint8_t, kSuperBytes>(&bytes[i + 8], kSuperBytes));
    out.push_back(s);
  }
  return out;
}

std::string slice_file_name(int slice) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "slice-%02d.pgo", slice);
  return buf;
}

std::string samples_file_name(int slice) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "samples-%02d.bin", slice);
  return buf;
}

}  // namespace pentago
