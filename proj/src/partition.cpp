#include "pentago/partition.h"

#include <bit>
#include <cstdio>

namespace pentago {
namespace {

uint64_t mix(uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

uint64_t feistel(const PartitionSeed& seed, int half, uint64_t x, bool inverse) {
  const uint64_t mask = (uint64_t(1) << half) - 1;
  uint64_t hi = x >> half, lo = x & mask;
  if (!inverse) {
    for (int r = 0; r < 4; r++) {
      const uint64_t f = mix(lo ^ seed.key[r] ^ uint64_t(r) << 56) & mask;
      const uint64_t t = hi ^ f;
      hi = lo;
      lo = t;
    }
  } else {
    for (int r = 3; r >= 0; r--) {
      const uint64_t t = lo;
      lo = hi;
      hi = t ^ (mix(lo ^ seed.key[r] ^ uint64_t(r) << 56) & mask);
    }
  }
  return hi << half | lo;
}

uint64_t mulhi_div(uint64_t a, uint64_t b, uint64_t c) {  // floor(a * b / c)
  return uint64_t((unsigned __int128)a * b / c);
}

}  // namespace

PartitionSeed PartitionSeed::default_seed() {
  return {{0x243F6A8885A308D3ull, 0x13198A2E03707344ull, 0xA4093822299F31D0ull, 0x082EFA98EC4E6C89ull}};
}

PartitionSeed PartitionSeed::parse(const std::string& text) {
  std::string hex = text;
  if (hex.rfind("0x", 0) == 0 || hex.rfind("0X", 0) == 0) hex = hex.substr(2);
  if (hex.empty() || hex.size() > 64) throw Error(Errc::invalid_argument, "seed must have 1 to 64 hex digits");
  hex = std::string(64 - hex.size(), '0') + hex;
  PartitionSeed s;
  for (int i = 0; i < 4; i++) {
    uint64_t w = 0;
    for (char ch : hex.substr(16 * i, 16)) {
      int v;
      if (ch >= '0' && ch <= '9')
        v = ch - '0';
      else if (ch >= 'a' && ch <= 'f')
        v = ch - 'a' + 10;
      else if (ch >= 'A' && ch <= 'F')
        v = ch - 'A' + 10;
      else
        throw Error(Errc::invalid_argument, "bad hex digit in seed '" + text + "'");
      w = w << 4 | uint64_t(v);
    }
    s.key[i] = w;
  }
  return s;
}

std::string PartitionSeed::hex() const {
  char buf[65];
  std::snprintf(buf, sizeof buf, "%016llx%016llx%016llx%016llx", (unsigned long long)key[0], (unsigned long long)key[1],
                (unsigned long long)key[2], (unsigned long long)key[3]);
  return buf;
}

uint64_t permute(const PartitionSeed& seed, uint64_t n, uint64_t i, bool inverse) {
  if (i >= n) throw Error(Errc::index_out_of_range, "permute index " + std::to_string(i) + " outside domain " + std::to_string(n));
  if (n == 1) return 0;
  int bits = std::bit_width(n - 1);
  bits += bits & 1;
  do i = feistel(seed, bits / 2, i, inverse);
  while (i >= n);
  return i;
}

std::array<uint64_t, 2> threefry2x64(std::array<uint64_t, 2> counter, std::array<uint64_t, 2> key) {
  static constexpr int rot[8] = {16, 42, 12, 31, 16, 32, 24, 21};
  const uint64_t ks[3] = {key[0], key[1], 0x1BD11BDAA9FC1A22ull ^ key[0] ^ key[1]};
  uint64_t x0 = counter[0] + ks[0], x1 = counter[1] + ks[1];
  for (int r = 0; r < 20; r++) {
    x0 += x1;
    x1 = std::rotl(x1, rot[r % 8]);
    x1 ^= x0;
    if (r % 4 == 3) {
      const int s = (r + 1) / 4;
      x0 += ks[s % 3];
      x1 += ks[(s + 1) % 3] + uint64_t(s);
    }
  }
  return {x0, x1};
}

Partition::Partition(const PartitionSeed& seed, int slice, int ranks) : seed_(seed), layout_(slice), ranks_(ranks) {
  if (ranks < 1) throw Error(Errc::invalid_argument, "need at least one rank");
}

uint64_t Partition::chunk_start(int rank) const { return mulhi_div(uint64_t(rank), layout_.lines(), uint64_t(ranks_)); }

int Partition::position_owner(uint64_t p) const {
  return int(((unsigned __int128)(p + 1) * uint64_t(ranks_) - 1) / layout_.lines());
}

int Partition::line_owner(const LineId& line) const {
  return position_owner(permute(seed_, layout_.lines(), layout_.line_number(line)));
}

LineId Partition::rank_line(int rank, uint64_t j) const {
  if (rank < 0 || rank >= ranks_ || j >= line_count(rank)) throw Error(Errc::index_out_of_range, "rank line out of range");
  return layout_.line(permute(seed_, layout_.lines(), chunk_start(rank) + j, true));
}

std::vector<LineId> Partition::lines_of_rank(int rank) const {
  std::vector<LineId> out;
  for (uint64_t j = 0; j < line_count(rank); j++) out.push_back(rank_line(rank, j));
  return out;
}

LineId Partition::block_line(const BlockId& block) const {
  const auto r = threefry2x64({layout_.block_number(block), uint64_t(block.slice)},
                              {seed_.key[0] ^ seed_.key[2], seed_.key[1] ^ seed_.key[3]});
  LineId line{block.slice, block.section, int(r[0] & 3), block.block};
  line.block[line.dim] = 0;
  return line;
}

uint64_t line_work(const LineId& line) {
  const Section& s = sections_of_slice(line.slice)[line.section];
  return line_supers(line) * uint64_t(9 - s.counts[line.dim][0] - s.counts[line.dim][1]);
}

BalanceReport partition_stats(const PartitionSeed& seed, int slice, int ranks) {
  const Partition part(seed, slice, ranks);
  const SliceLayout& layout = part.layout();
  std::vector<std::array<uint64_t, 4>> per(ranks);
  std::vector<uint32_t> owner(layout.lines());
  uint64_t n = 0;
  for (const Section& s : layout.sections()) {
    const Index4 grid = block_grid(s), shape = section_shape(s);
    for (int d = 0; d < 4; d++) {
      const uint64_t empty = uint64_t(9 - s.counts[d][0] - s.counts[d][1]);
      Index4 b{};
      // other coordinates in lexicographic order, matching SliceLayout::line
      for (b[0] = 0; b[0] < (d == 0 ? 1 : grid[0]); b[0]++)
        for (b[1] = 0; b[1] < (d == 1 ? 1 : grid[1]); b[1]++)
          for (b[2] = 0; b[2] < (d == 2 ? 1 : grid[2]); b[2]++)
            for (b[3] = 0; b[3] < (d == 3 ? 1 : grid[3]); b[3]++, n++) {
              const int r = part.position_owner(permute(seed, layout.lines(), n));
              uint64_t supers = shape[d];
              for (int e = 0; e < 4; e++)
                if (e != d) supers *= block_extent(shape[e], b[e]);
              owner[n] = uint32_t(r);
              per[r][1]++;
              per[r][3] += supers * empty;
            }
    }
  }
  const std::array<uint64_t, 2> key{seed.key[0] ^ seed.key[2], seed.key[1] ^ seed.key[3]};
  for (int si = 0; si < int(layout.sections().size()); si++) {
    const Section& s = layout.sections()[si];
    const Index4 grid = block_grid(s), shape = section_shape(s);
    const uint64_t base = layout.section_block_offset(si);
    const uint64_t line_base = layout.section_line_offset(si);
    // line numbers inside the section: axis offset plus the other coordinates
    uint64_t axis_offset[4], acc = 0;
    for (int d = 0; d < 4; d++) {
      axis_offset[d] = acc;
      uint64_t n = 1;
      for (int e = 0; e < 4; e++)
        if (e != d) n *= grid[e];
      acc += n;
    }
    Index4 b{};
    uint64_t number = base;
    for (b[0] = 0; b[0] < grid[0]; b[0]++)
      for (b[1] = 0; b[1] < grid[1]; b[1]++)
        for (b[2] = 0; b[2] < grid[2]; b[2]++)
          for (b[3] = 0; b[3] < grid[3]; b[3]++, number++) {
            const int d = int(threefry2x64({number, uint64_t(slice)}, key)[0] & 3);
            uint64_t r = 0;
            for (int e = 0; e < 4; e++)
              if (e != d) r = r * grid[e] + b[e];
            const int o = int(owner[line_base + axis_offset[d] + r]);
            uint64_t supers = 1;
            for (int e = 0; e < 4; e++) supers *= block_extent(shape[e], b[e]);
            per[o][0]++;
            per[o][2] += supers;
          }
  }
  BalanceReport rep;
  rep.slice = slice;
  rep.ranks = ranks;
  for (int i = 0; i < 4; i++) {
    rep.min[i] = UINT64_MAX;
    for (auto& p : per) {
      rep.min[i] = std::min(rep.min[i], p[i]);
      rep.max[i] = std::max(rep.max[i], p[i]);
    }
    if (rep.min[i] == 0) rep.degenerate = true;
  }
  return rep;
}

}  // namespace pentago
