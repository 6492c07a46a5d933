#include "pentago/codec.h"

#include <lzma.h>
#include <zlib.h>

#include "pentago/error.h"

namespace pentago {

const char* codec_name(Codec c) {
  switch (c) {
    case Codec::identity: return "identity";
    case Codec::zlib: return "zlib";
    case Codec::lzma: return "lzma";
  }
  return "?";
}

Codec parse_codec(const std::string& name) {
  for (Codec c : {Codec::identity, Codec::zlib, Codec::lzma})
    if (name == codec_name(c)) return c;
  throw Error(Errc::unknown_codec, "no codec named '" + name + "'");
}

Codec codec_from_id(uint8_t id) {
  if (id > uint8_t(Codec::lzma)) throw Error(Errc::unknown_codec, "codec id " + std::to_string(id));
  return Codec(id);
}

std::vector<uint8_t> compress(Codec c, std::span<const uint8_t> raw) {
  switch (c) {
    case Codec::identity: return {raw.begin(), raw.end()};
    case Codec::zlib: {
      uLongf len = compressBound(uLong(raw.size()));
      std::vector<uint8_t> out(len);
      if (compress2(out.data(), &len, raw.data(), uLong(raw.size()), 1) != Z_OK)
        throw Error(Errc::io_error, "zlib compression failed");
      out.resize(len);
      return out;
    }
    case Codec::lzma: {
      std::vector<uint8_t> out(lzma_stream_buffer_bound(raw.size()));
      size_t pos = 0;
      if (lzma_easy_buffer_encode(1, LZMA_CHECK_NONE, nullptr, raw.data(), raw.size(), out.data(), &pos, out.size()) != LZMA_OK)
        throw Error(Errc::io_error, "lzma compression failed");
      out.resize(pos);
      return out;
    }
  }
  throw Error(Errc::unknown_codec, "codec id " + std::to_string(int(c)));
}

std::vector<uint8_t> decompress(Codec c, std::span<const uint8_t> packed, size_t raw_size) {
  std::vector<uint8_t> out(raw_size);
  switch (c) {
    case Codec::identity:
      if (packed.size() != raw_size) throw Error(Errc::shape_mismatch, "identity block has the wrong length");
      std::copy(packed.begin(), packed.end(), out.begin());
      return out;
    case Codec::zlib: {
      uLongf len = uLongf(raw_size);
      if (uncompress(out.data(), &len, packed.data(), uLong(packed.size())) != Z_OK || len != raw_size)
        throw Error(Errc::io_error, "zlib decompression failed");
      return out;
    }
    case Codec::lzma: {
      uint64_t limit = UINT64_MAX;
      size_t in_pos = 0, out_pos = 0;
      if (lzma_stream_buffer_decode(&limit, 0, nullptr, packed.data(), &in_pos, packed.size(), out.data(), &out_pos,
                                    out.size()) != LZMA_OK ||
          out_pos != raw_size)
        throw Error(Errc::io_error, "lzma decompression failed");
      return out;
    }
  }
  throw Error(Errc::unknown_codec, "codec id " + std::to_string(int(c)));
}

}  // namespace pentago
