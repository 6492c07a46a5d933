#include <filesystem>
#include <fstream>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "oracles.h"
#include "pentago/boundary.h"
#include "pentago/store.h"

using namespace pentago;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pentago-store-test-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

// Every block of a small slice filled with injected values.
std::vector<PackedBlock> slice_blocks(int slice, Codec codec, uint64_t seed) {
  std::vector<PackedBlock> out;
  const SliceLayout layout(slice);
  for (uint64_t i = 0; i < layout.blocks(); i++) {
    const BlockId id = layout.block(i);
    const auto raw = encode_block(inject_block(seed, id));
    out.push_back({id, codec, uint32_t(raw.size()), compress(codec, raw)});
  }
  return out;
}

}  // namespace

TEST_CASE("crc64 check value") {
  const std::string s = "123456789";
  CHECK(crc64({reinterpret_cast<const uint8_t*>(s.data()), s.size()}) == 0x995DC9BBDF1939FAull);
  CHECK(crc64({}) == 0);
}

TEST_CASE("codecs round trip") {
  std::mt19937_64 rng(3);
  std::vector<SuperValue> supers;
  for (int i = 0; i < 300; i++) supers.push_back(oracle::random_value(rng));
  const auto raw = encode_block(supers);
  CHECK(raw.size() == 300 * 64);
  for (Codec c : {Codec::identity, Codec::zlib, Codec::lzma}) {
    const auto packed = compress(c, raw);
    CHECK(decompress(c, packed, raw.size()) == raw);
    CHECK(parse_codec(codec_name(c)) == c);
  }
  CHECK(decode_block(raw) == supers);
  CHECK_THROWS_AS(codec_from_id(9), Error);
}

TEST_CASE("slice file round trip for every codec") {
  for (Codec c : {Codec::identity, Codec::zlib, Codec::lzma}) {
    const auto blocks = slice_blocks(4, c, 21);
    const std::string path = scratch("slice4-" + std::string(codec_name(c)) + ".pgo").string();
    write_slice(path, 4, blocks);
    SliceReader reader(open_file(path));
    CHECK(reader.slice() == 4);
    CHECK(reader.index().size() == blocks.size());
    CHECK(reader.verify() == blocks.size());
    for (const PackedBlock& b : blocks) REQUIRE(reader.read_block(b.id) == inject_block(21, b.id));
    uint64_t last = 0;
    for (const IndexEntry& e : reader.index()) {
      CHECK(e.offset >= last);
      last = e.offset + e.packed_size;
    }
    CHECK(last == fs::file_size(path));
  }
}

TEST_CASE("missing block and corrupted payload") {
  const auto blocks = slice_blocks(3, Codec::zlib, 5);
  const std::string path = scratch("slice3.pgo").string();
  write_slice(path, 3, blocks);
  SliceReader reader(open_file(path));
  BlockId absent{3, 0, {5, 5, 5, 5}};
  try {
    reader.read_block(absent);
    FAIL("expected BlockNotFound");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::block_not_found);
  }

  const IndexEntry victim = reader.index()[reader.index().size() / 2];
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekg(std::streamoff(victim.offset + victim.packed_size / 2));
    char byte = 0;
    f.read(&byte, 1);
    byte ^= 0x20;
    f.seekp(std::streamoff(victim.offset + victim.packed_size / 2));
    f.write(&byte, 1);
  }
  SliceReader damaged(open_file(path));
  try {
    damaged.read_block(victim.id);
    FAIL("expected ChecksumMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::checksum_mismatch);
  }
  CHECK_NOTHROW(damaged.read_block(reader.index().front().id));
  CHECK_THROWS_AS(damaged.verify(), Error);
}

TEST_CASE("corrupted index is rejected") {
  const std::string path = scratch("slice2.pgo").string();
  write_slice(path, 2, slice_blocks(2, Codec::identity, 1));
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(std::streamoff(kHeaderBytes + 3));
    f.put(char(0x7f));
  }
  try {
    SliceReader r(open_file(path));
    FAIL("expected ChecksumMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::checksum_mismatch);
  }
}

TEST_CASE("unknown codec id in the index") {
  auto blocks = slice_blocks(1, Codec::identity, 1);
  blocks[0].codec = Codec(7);
  const std::string path = scratch("slice1.pgo").string();
  write_slice(path, 1, blocks);
  SliceReader reader(open_file(path));
  try {
    reader.read_block(blocks[0].id);
    FAIL("expected UnknownCodec");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unknown_codec);
  }
}

TEST_CASE("single block reads touch only metadata and that block") {
  const auto blocks = slice_blocks(5, Codec::zlib, 8);
  const std::string path = scratch("slice5.pgo").string();
  write_slice(path, 5, blocks);
  auto counting = std::make_shared<CountingSource>(open_file(path));
  SliceReader reader(counting);
  const uint64_t meta = counting->bytes();
  CHECK(meta == reader.metadata_bytes());
  CHECK(meta == kHeaderBytes + sections_of_slice(5).size() * kSectionEntryBytes + blocks.size() * kIndexEntryBytes);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; i++) {
    const IndexEntry& e = reader.index()[rng() % reader.index().size()];
    counting->reset();
    reader.read_block(e.id);
    CHECK(counting->requests() == 1);
    CHECK(counting->bytes() == e.packed_size);
  }
  // a fresh reader pays for the header and the index exactly once
  counting->reset();
  read_block(counting, blocks.back().id);
  CHECK(counting->bytes() == meta + blocks.back().data.size());
}

TEST_CASE("blocks over HTTP range requests") {
  const auto blocks = slice_blocks(4, Codec::zlib, 13);
  const fs::path path = scratch("slice4-http.pgo");
  write_slice(path.string(), 4, blocks);

  // Serves the file through a content provider so the bytes actually sent can
  // be counted.
  std::ifstream in(path, std::ios::binary);
  const std::string file((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  httplib::Server server;
  std::atomic<uint64_t> served{0};
  server.Get("/data/slice4-http.pgo", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content_provider(file.size(), "application/octet-stream",
                             [&](size_t offset, size_t length, httplib::DataSink& sink) {
                               served += length;
                               return sink.write(file.data() + offset, length);
                             });
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  const std::string url = "http://127.0.0.1:" + std::to_string(port) + "/data/" + path.filename().string();
  auto counting = std::make_shared<CountingSource>(open_source(url));
  SliceReader reader(counting);
  CHECK(reader.index().size() == blocks.size());
  for (size_t i = 0; i < blocks.size(); i += 7) {
    counting->reset();
    const uint64_t before = served;
    REQUIRE(reader.read_block(blocks[i].id) == inject_block(13, blocks[i].id));
    CHECK(counting->bytes() == blocks[i].data.size());
    CHECK(served - before == blocks[i].data.size());
  }
  server.stop();
  thread.join();

  try {
    open_source(url)->size();
    FAIL("expected Unavailable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unavailable);
  }
}

TEST_CASE("counts and samples files") {
  const std::vector<CountsRecord> counts{{3, 100, 10, 20, 25570}, {2, 40, 1, 2, 10237}};
  const std::string cpath = scratch("counts.txt").string();
  write_counts(cpath, counts);
  CHECK(read_counts(cpath) == counts);

  std::mt19937_64 rng(4);
  std::vector<Sample> samples;
  for (int i = 0; i < 20; i++) samples.push_back({oracle::random_board(rng, i), oracle::random_value(rng)});
  const std::string spath = scratch("samples.bin").string();
  write_samples(spath, samples);
  CHECK(fs::file_size(spath) == samples.size() * 72);
  CHECK(kSampleBytes == 72);
  CHECK(read_samples(spath) == samples);
  write_samples(spath, {});
  CHECK(read_samples(spath).empty());
}
