#include "pentago/boundary.h"

#include <charconv>

namespace pentago {
namespace {

uint64_t mix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

BoundarySpec BoundarySpec::parse(const std::string& text) {
  if (text == "terminal") return terminal();
  const std::string prefix = "random:";
  if (text.rfind(prefix, 0) == 0) {
    uint64_t seed = 0;
    const char* begin = text.data() + prefix.size();
    const char* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(begin, end, seed);
    if (ec == std::errc{} && p == end && begin != end) return random(seed);
  }
  throw Error(Errc::invalid_argument, "boundary must be 'terminal' or 'random:SEED', got '" + text + "'");
}

std::string BoundarySpec::to_string() const {
  return mode == Mode::real_terminal ? "terminal" : "random:" + std::to_string(seed);
}

Value injected_value(uint64_t seed, Board b) {
  if (auto t = terminal_value(b)) return *t;
  const uint64_t h = mix(mix(seed) ^ canonicalize_global(b).board.key());
  return Value(int(h % 3) - 1);
}

SuperValue injected_super(uint64_t seed, Board b) {
  SuperValue v;
  for (int l = 0; l < 256; l++) v.assign(l, injected_value(seed, transform_board(GroupElem{LocalRot{uint8_t(l)}, {}}, b)));
  return v;
}

std::vector<SuperValue> inject_block(uint64_t seed, const BlockId& id) {
  const Section& s = sections_of_slice(id.slice)[id.section];
  const Index4 shape = section_shape(s);
  Index4 ext;
  for (int i = 0; i < 4; i++) ext[i] = block_extent(shape[i], id.block[i]);
  std::vector<SuperValue> out;
  out.reserve(size_t(ext[0]) * ext[1] * ext[2] * ext[3]);
  for (int i0 = 0; i0 < ext[0]; i0++)
    for (int i1 = 0; i1 < ext[1]; i1++)
      for (int i2 = 0; i2 < ext[2]; i2++)
        for (int i3 = 0; i3 < ext[3]; i3++) {
          const Index4 idx{kBlockSize * id.block[0] + i0, kBlockSize * id.block[1] + i1, kBlockSize * id.block[2] + i2,
                           kBlockSize * id.block[3] + i3};
          out.push_back(injected_super(seed, board_at(s, idx)));
        }
  return out;
}

}  // namespace pentago
