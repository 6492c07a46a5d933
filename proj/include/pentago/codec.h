#pragma once

// Block compression.  Results never depend on the codec; it only trades time
// for memory.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pentago {

enum class Codec : uint8_t { identity = 0, zlib = 1, lzma = 2 };

const char* codec_name(Codec c);
Codec parse_codec(const std::string& name);
// Throws UnknownCodec for ids outside the enum.
Codec codec_from_id(uint8_t id);

std::vector<uint8_t> compress(Codec c, std::span<const uint8_t> raw);
// raw_size must be the exact decompressed length.
std::vector<uint8_t> decompress(Codec c, std::span<const uint8_t> packed, size_t raw_size);

}  // namespace pentago
