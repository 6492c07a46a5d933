#include "pentago/super.h"

#include <bit>
#include <vector>

namespace pentago {
namespace {

struct WindowPart {
  int q;
  int slot;  // byte of this part in the quadrant's row
};

// Windows touch two or three quadrants.  A window's rotation set depends only
// on the turns of its quadrants, so it is built as a small table over those
// turns (bit r_a + 4 r_b + 16 r_c) and tables of windows sharing the same
// quadrants are merged before expanding to 256 bits.
struct Window {
  int parts = 0;
  int group = 0;
  WindowPart part[3];
};

struct Group {
  int parts = 0;
  int quadrants[3] = {};
  std::vector<std::array<RotSet, 256>> expand;  // per table byte
};

struct WinTables {
  std::array<std::array<RotSet, 16>, 4> quadrant_mask;
  std::array<Window, 32> windows;
  std::vector<Group> groups;
  // Per quadrant and black-relative code, one byte per window part: low nibble
  // the turns covering the part with own stones, high nibble the turns leaving
  // exactly one cell of it, which is empty.
  std::array<int, 4> slots{};
  std::array<std::vector<uint8_t>, 4> rows;
  std::array<uint16_t, kQuadrantStates> swap_colors{};
  std::array<uint64_t, 16> spread4{}, spread16{};
  std::array<uint8_t, 256> conj[8];
};

WinTables build() {
  const auto& t = detail::quadrant_tables();
  WinTables wt;
  for (int q = 0; q < 4; q++)
    for (int nib = 0; nib < 16; nib++)
      for (int g = 0; g < 256; g++)
        if (nib >> LocalRot{uint8_t(g)}.r(q) & 1) wt.quadrant_mask[q][nib].set(g);
  for (int d = 0; d < 8; d++)
    for (int g = 0; g < 256; g++) wt.conj[d][g] = conjugate(GlobalSym{uint8_t(d)}, LocalRot{uint8_t(g)}).index;
  for (int nib = 0; nib < 16; nib++)
    for (int r = 0; r < 4; r++)
      if (nib >> r & 1) {
        wt.spread4[nib] |= uint64_t(1) << (4 * r);
        wt.spread16[nib] |= uint64_t(1) << (16 * r);
      }
  for (int c = 0; c < kQuadrantStates; c++) wt.swap_colors[c] = t.code(t.white[c], t.black[c]);

  const auto& wins = win_windows();
  std::array<std::vector<uint16_t>, 4> masks;
  for (int i = 0; i < 32; i++) {
    Window& win = wt.windows[i];
    for (int q = 0; q < 4; q++) {
      const uint16_t m = uint16_t(wins[i] >> (9 * q) & 511);
      if (!m) continue;
      win.part[win.parts++] = WindowPart{q, int(masks[q].size())};
      masks[q].push_back(m);
    }
    int found = -1;
    for (int g = 0; g < int(wt.groups.size()) && found < 0; g++) {
      const Group& gr = wt.groups[g];
      bool same = gr.parts == win.parts;
      for (int k = 0; k < win.parts && same; k++) same = gr.quadrants[k] == win.part[k].q;
      if (same) found = g;
    }
    if (found < 0) {
      Group gr;
      gr.parts = win.parts;
      for (int k = 0; k < win.parts; k++) gr.quadrants[k] = win.part[k].q;
      const int bytes = win.parts == 2 ? 2 : 8;
      gr.expand.resize(size_t(bytes));
      for (int byte = 0; byte < bytes; byte++)
        for (int v = 0; v < 256; v++)
          for (int b = 0; b < 8; b++) {
            if (!(v >> b & 1)) continue;
            const int cell = 8 * byte + b;
            RotSet s = RotSet::all();
            for (int k = 0; k < gr.parts; k++) s &= wt.quadrant_mask[gr.quadrants[k]][1 << (cell >> (2 * k) & 3)];
            gr.expand[byte][v] |= s;
          }
      found = int(wt.groups.size());
      wt.groups.push_back(std::move(gr));
    }
    win.group = found;
  }
  if (wt.groups.size() > 16) throw Error(Errc::invalid_argument, "too many window groups");

  for (int q = 0; q < 4; q++) {
    const int n = int(masks[q].size());
    wt.slots[q] = n;
    wt.rows[q].resize(size_t(kQuadrantStates) * n);
    for (int c = 0; c < kQuadrantStates; c++) {
      const uint16_t empty = uint16_t(511 & ~(t.black[c] | t.white[c]));
      for (int k = 0; k < n; k++) {
        const uint16_t m = masks[q][k];
        uint8_t byte = 0;
        for (int r = 0; r < 4; r++) {
          const uint16_t lack = uint16_t(m & ~t.rotate_bits[r][t.black[c]]);
          if (!lack) byte |= uint8_t(1 << r);
          if (std::popcount(lack) == 1 && (t.rotate_bits[r][empty] & lack)) byte |= uint8_t(16 << r);
        }
        wt.rows[q][size_t(c) * n + k] = byte;
      }
    }
  }
  return wt;
}

const WinTables& tables() {
  static const WinTables wt = build();
  return wt;
}

// Two-part windows pass nibble 1 (no turn) for the missing third part.
inline uint64_t outer(const WinTables& wt, const uint8_t* nib) {
  return nib[0] * wt.spread4[nib[1]] * wt.spread16[nib[2]];
}

RotSet expand_groups(const WinTables& wt, const uint64_t* table) {
  RotSet out;
  for (size_t g = 0; g < wt.groups.size(); g++) {
    uint64_t t = table[g];
    for (int byte = 0; t; byte++, t >>= 8)
      if (t & 255) out |= wt.groups[g].expand[byte][t & 255];
  }
  return out;
}

// Rows of the four quadrants of b from c's point of view.
inline void quadrant_rows(const WinTables& wt, Board b, Color c, const uint8_t* row[4]) {
  for (int q = 0; q < 4; q++) {
    const uint16_t raw = b.quadrant(q);
    const uint16_t code = c == Color::black ? raw : wt.swap_colors[raw];
    row[q] = wt.rows[q].data() + size_t(code) * wt.slots[q];
  }
}

}  // namespace

namespace detail {
const RotSet& quadrant_rotation_mask(int q, int nibble) { return tables().quadrant_mask[q][nibble]; }
}  // namespace detail

int RotSet::count() const {
  return std::popcount(w[0]) + std::popcount(w[1]) + std::popcount(w[2]) + std::popcount(w[3]);
}

void SuperValue::assign(int i, Value v) {
  const uint64_t bit = uint64_t(1) << (i & 63);
  auto put = [&](RotSet& s, bool on) { s.w[i >> 6] = on ? s.w[i >> 6] | bit : s.w[i >> 6] & ~bit; };
  put(win, v == Value::win);
  put(notloss, v != Value::loss);
}

RotSet rmax(const RotSet& s) {
  RotSet out;
  for (int k = 0; k < 4; k++) {
    const uint64_t x = s.w[k];
    uint64_t r = 0;
    // r0 is bits 0-1 of the in-word index, r1 bits 2-3, r2 bits 4-5
    r |= ((x >> 1) & 0x7777777777777777ull) | ((x << 3) & 0x8888888888888888ull);
    r |= ((x << 1) & 0xEEEEEEEEEEEEEEEEull) | ((x >> 3) & 0x1111111111111111ull);
    r |= ((x >> 4) & 0x0FFF0FFF0FFF0FFFull) | ((x << 12) & 0xF000F000F000F000ull);
    r |= ((x << 4) & 0xFFF0FFF0FFF0FFF0ull) | ((x >> 12) & 0x000F000F000F000Full);
    r |= (x >> 16) | (x << 48);
    r |= (x << 16) | (x >> 48);
    r |= s.w[(k + 1) & 3] | s.w[(k + 3) & 3];
    out.w[k] = r;
  }
  return out;
}

RotSet super_wins(Board b, Color c) {
  const auto& wt = tables();
  const uint8_t* row[4];
  quadrant_rows(wt, b, c, row);
  uint64_t table[16] = {};
  for (const Window& win : wt.windows) {
    uint8_t nib[3] = {1, 1, 1};
    for (int i = 0; i < win.parts; i++) nib[i] = row[win.part[i].q][win.part[i].slot] & 15;
    table[win.group] |= outer(wt, nib);
  }
  return expand_groups(wt, table);
}

namespace {

// Five-in-a-row rotations for c before and after one placement by c.
void scan_placements(Board b, Color c, int qsel, RotSet* wins, RotSet* placed) {
  const auto& t = detail::quadrant_tables();
  const auto& wt = tables();
  const uint8_t* row[4];
  quadrant_rows(wt, b, c, row);
  uint8_t usable[4];
  bool has_empty = false;
  for (int q = 0; q < 4; q++) {
    const uint16_t raw = b.quadrant(q);
    const bool open = (qsel < 0 || qsel == q) && (t.black[raw] | t.white[raw]) != 511;
    usable[q] = open ? 15 : 0;
    has_empty |= open;
  }
  uint64_t before[16] = {}, after[16] = {};
  for (const Window& win : wt.windows) {
    // zero nibbles zero the products, so no case analysis is needed
    uint8_t all[3] = {1, 1, 1}, near[3] = {};
    for (int i = 0; i < win.parts; i++) {
      const WindowPart& p = win.part[i];
      const uint8_t byte = row[p.q][p.slot];
      all[i] = byte & 15;
      near[i] = (byte >> 4) & usable[p.q];
    }
    const uint64_t done = outer(wt, all);
    uint8_t mixed[3] = {near[0], all[1], all[2]};
    uint64_t acc = outer(wt, mixed);
    mixed[0] = all[0];
    mixed[1] = near[1];
    acc |= outer(wt, mixed);
    mixed[1] = all[1];
    mixed[2] = near[2];
    acc |= outer(wt, mixed);
    before[win.group] |= done;
    after[win.group] |= acc;
  }
  if (wins) *wins = expand_groups(wt, before);
  if (placed) {
    // a board that already has five keeps it after any placement
    *placed = has_empty ? expand_groups(wt, after) | (wins ? *wins : expand_groups(wt, before)) : RotSet{};
  }
}

}  // namespace

RotSet placement_wins(Board b, Color c, int qsel) {
  RotSet out;
  scan_placements(b, c, qsel, nullptr, &out);
  return out;
}

MoverWins mover_wins(Board b, Color c) {
  MoverWins m;
  scan_placements(b, c, -1, &m.wins, &m.placements);
  return m;
}

RotSet transform_super(const GroupElem& g, const RotSet& s) {
  const auto& conj = tables().conj[g.global.index];
  RotSet out;
  for (int x = 0; x < 256; x++) {
    const int y = (LocalRot{conj[x]} + g.local).index;
    if (s.test(y)) out.set(x);
  }
  return out;
}

SuperValue transform_super(const GroupElem& g, const SuperValue& v) {
  return {transform_super(g, v.win), transform_super(g, v.notloss)};
}

SuperValue negate_value(const SuperValue& v) { return {~v.notloss, ~v.win}; }

SuperValue merge_value(const SuperValue& a, const SuperValue& b) {
  return {a.win | b.win, a.notloss | b.notloss};
}

SuperValue adjudicate_terminals(const SuperValue& v, const RotSet& mover_wins, const RotSet& other_wins) {
  const RotSet over = mover_wins | other_wins;
  return {(v.win & ~over) | (mover_wins & ~other_wins), (v.notloss & ~over) | mover_wins};
}

SuperValue full_board_value(Board b) {
  const Color c = b.to_move();
  const RotSet wc = super_wins(b, c), wo = super_wins(b, other(c));
  return {wc & ~wo, wc | ~wo};
}

void write_super(const SuperValue& v, std::span<uint8_t, kSuperBytes> out) {
  for (int k = 0; k < 4; k++)
    for (int j = 0; j < 8; j++) {
      out[8 * k + j] = uint8_t(v.win.w[k] >> (8 * j));
      out[32 + 8 * k + j] = uint8_t(v.notloss.w[k] >> (8 * j));
    }
}

SuperValue read_super(std::span<const uint8_t, kSuperBytes> in) {
  SuperValue v;
  for (int k = 0; k < 4; k++)
    for (int j = 0; j < 8; j++) {
      v.win.w[k] |= uint64_t(in[8 * k + j]) << (8 * j);
      v.notloss.w[k] |= uint64_t(in[32 + 8 * k + j]) << (8 * j);
    }
  return v;
}

RotSet odd_rotations() {
  RotSet s;
  for (int g = 0; g < 256; g++) {
    const LocalRot r{uint8_t(g)};
    if ((r.r(0) + r.r(1) + r.r(2) + r.r(3)) & 1) s.set(g);
  }
  return s;
}

}  // namespace pentago
