#include "pentago/layout.h"

#include <algorithm>
#include <bit>

namespace pentago {
namespace {

struct Dictionaries {
  std::array<std::array<QuadDict, 10>, 10> dicts;
  std::array<int32_t, kQuadrantStates> index{};
};

Dictionaries build_dicts() {
  const auto& t = detail::quadrant_tables();
  Dictionaries d;
  for (int b = 0; b <= 9; b++)
    for (int w = 0; b + w <= 9; w++) {
      QuadDict& qd = d.dicts[b][w];
      qd.black = b;
      qd.white = w;
      std::vector<uint16_t> pairs, selfs;
      for (int c = 0; c < kQuadrantStates; c++) {
        if (t.rmin[c] != c || std::popcount(t.black[c]) != b || std::popcount(t.white[c]) != w) continue;
        const uint16_t p = t.rmin[t.reflect[c]];
        if (p == c)
          selfs.push_back(uint16_t(c));
        else if (c < p)
          pairs.push_back(uint16_t(c));
      }
      for (uint16_t c : pairs) {
        qd.states.push_back(c);
        qd.states.push_back(t.rmin[t.reflect[c]]);
      }
      qd.states.insert(qd.states.end(), selfs.begin(), selfs.end());
      for (size_t i = 0; i < qd.states.size(); i++) {
        const uint16_t c = qd.states[i];
        d.index[c] = int32_t(i);
        int orbit = 1;
        while (orbit < 4 && t.rotate[orbit][c] != c) orbit++;
        qd.orbit.push_back(uint8_t(orbit));
        qd.partner.push_back(uint32_t(i < 2 * pairs.size() ? i ^ 1 : i));
      }
    }
  return d;
}

const Dictionaries& dictionaries() {
  static const Dictionaries d = build_dicts();
  return d;
}

std::array<std::vector<Section>, 37> build_sections() {
  std::array<std::vector<Section>, 37> out;
  std::vector<std::array<uint8_t, 2>> pairs;
  for (int b = 0; b <= 9; b++)
    for (int w = 0; b + w <= 9; w++) pairs.push_back({uint8_t(b), uint8_t(w)});
  Section s;
  for (auto& p0 : pairs)
    for (auto& p1 : pairs)
      for (auto& p2 : pairs)
        for (auto& p3 : pairs) {
          s.counts = {p0, p1, p2, p3};
          if (!s.valid()) continue;
          if (standardize_section(s).first == s) out[s.slice()].push_back(s);
        }
  return out;
}

const std::array<std::vector<Section>, 37>& all_sections() {
  static const auto sections = build_sections();
  return sections;
}

}  // namespace

bool Section::valid() const {
  for (auto& c : counts)
    if (c[0] + c[1] > 9) return false;
  const int d = black() - white();
  return d == 0 || d == 1;
}

Section Section::transform(GlobalSym d) const {
  Section out;
  for (int q = 0; q < 4; q++) out.counts[quadrant_image(d, q)] = counts[q];
  return out;
}

Section section_of(Board b) {
  const auto& t = detail::quadrant_tables();
  Section s;
  for (int q = 0; q < 4; q++)
    s.counts[q] = {uint8_t(std::popcount(t.black[b.quadrant(q)])), uint8_t(std::popcount(t.white[b.quadrant(q)]))};
  return s;
}

std::string to_string(const Section& s) {
  std::string out = "[";
  for (int q = 0; q < 4; q++) {
    if (q) out += " ";
    out += std::to_string(s.counts[q][0]) + "," + std::to_string(s.counts[q][1]);
  }
  return out + "]";
}

std::pair<Section, GlobalSym> standardize_section(const Section& s) {
  std::pair<Section, GlobalSym> best{s, GlobalSym{}};
  for (int d = 1; d < 8; d++) {
    const Section img = s.transform(GlobalSym{uint8_t(d)});
    if (img < best.first) best = {img, GlobalSym{uint8_t(d)}};
  }
  return best;
}

const std::vector<Section>& sections_of_slice(int n) {
  if (n < 0 || n > 36) throw Error(Errc::invalid_argument, "slice " + std::to_string(n) + " out of range");
  return all_sections()[n];
}

int section_index(const Section& s) {
  if (!s.valid()) return -1;
  const auto& list = sections_of_slice(s.slice());
  auto it = std::lower_bound(list.begin(), list.end(), s);
  return it != list.end() && *it == s ? int(it - list.begin()) : -1;
}

const QuadDict& quad_states(int black, int white) {
  if (black < 0 || white < 0 || black + white > 9) throw Error(Errc::invalid_argument, "bad quadrant counts");
  return dictionaries().dicts[black][white];
}

int dict_index(uint16_t code) { return dictionaries().index[detail::quadrant_tables().rmin[code]]; }

Index4 section_shape(const Section& s) {
  Index4 d;
  for (int q = 0; q < 4; q++) d[q] = quad_states(s.counts[q][0], s.counts[q][1]).size();
  return d;
}

Index4 block_grid(const Section& s) {
  Index4 g = section_shape(s);
  for (int& x : g) x = (x + kBlockSize - 1) / kBlockSize;
  return g;
}

Board board_at(const Section& s, const Index4& idx) {
  std::array<uint16_t, 4> codes;
  for (int q = 0; q < 4; q++) {
    const QuadDict& d = quad_states(s.counts[q][0], s.counts[q][1]);
    if (idx[q] < 0 || idx[q] >= d.size())
      throw Error(Errc::index_out_of_range, "index " + std::to_string(idx[q]) + " outside " + to_string(s));
    codes[q] = d.states[idx[q]];
  }
  return Board::from_quadrants(codes);
}

Located locate(Board b) {
  const auto& t = detail::quadrant_tables();
  const Section s0 = section_of(b);
  const Section target = standardize_section(s0).first;
  Located best;
  bool found = false;
  for (int di = 0; di < 8; di++) {
    const GlobalSym d{uint8_t(di)};
    if (s0.transform(d) != target) continue;
    const int sign = d.reflected() ? -1 : 1;
    Index4 idx;
    int r[4];
    for (int q = 0; q < 4; q++) {
      const uint16_t img = t.global(d, b.quadrant(q));
      idx[quadrant_image(d, q)] = dict_index(img);
      r[q] = sign * t.rmin_turns[img];
    }
    if (!found || idx < best.index) {
      best = Located{target, idx, GroupElem{LocalRot::from(r[0], r[1], r[2], r[3]), d}};
      found = true;
    }
  }
  return best;
}

std::pair<Section, GlobalSym> child_section(const Section& s, int q, Color c) {
  if (s.counts[q][0] + s.counts[q][1] >= 9) throw Error(Errc::full_quadrant, "quadrant " + std::to_string(q) + " is full");
  if (c != s.to_move()) throw Error(Errc::wrong_turn, "section " + to_string(s) + " has the other side to move");
  Section child = s;
  child.counts[q][c == Color::black ? 0 : 1]++;
  return standardize_section(child);
}

std::string to_string(const BlockId& b) {
  return "block(" + std::to_string(b.slice) + ":" + std::to_string(b.section) + ":" + std::to_string(b.block[0]) + "," +
         std::to_string(b.block[1]) + "," + std::to_string(b.block[2]) + "," + std::to_string(b.block[3]) + ")";
}

std::string to_string(const LineId& l) {
  std::string s = "line(" + std::to_string(l.slice) + ":" + std::to_string(l.section) + ":d" + std::to_string(l.dim);
  for (int i = 0; i < 4; i++) s += (i ? "," : ":") + (i == l.dim ? std::string("*") : std::to_string(l.block[i]));
  return s + ")";
}

int block_supers(const BlockId& b) {
  const Index4 shape = section_shape(sections_of_slice(b.slice)[b.section]);
  int n = 1;
  for (int i = 0; i < 4; i++) n *= block_extent(shape[i], b.block[i]);
  return n;
}

int line_length(const LineId& l) { return block_grid(sections_of_slice(l.slice)[l.section])[l.dim]; }

BlockId line_block(const LineId& l, int i) {
  BlockId b{l.slice, l.section, l.block};
  b.block[l.dim] = i;
  return b;
}

uint64_t line_supers(const LineId& l) {
  const Index4 shape = section_shape(sections_of_slice(l.slice)[l.section]);
  uint64_t n = shape[l.dim];
  for (int i = 0; i < 4; i++)
    if (i != l.dim) n *= block_extent(shape[i], l.block[i]);
  return n;
}

SliceLayout::SliceLayout(int slice) : slice_(slice), sections_(&sections_of_slice(slice)) {
  block_offset_.push_back(0);
  line_offset_.push_back(0);
  for (const Section& s : *sections_) {
    const Index4 g = block_grid(s);
    const Index4 shape = section_shape(s);
    grids_.push_back(g);
    block_offset_.push_back(block_offset_.back() + uint64_t(g[0]) * g[1] * g[2] * g[3]);
    std::array<uint64_t, 5> dl{};
    for (int d = 0; d < 4; d++) {
      uint64_t n = 1;
      for (int e = 0; e < 4; e++)
        if (e != d) n *= g[e];
      dl[d + 1] = dl[d] + n;
    }
    dim_line_offset_.push_back(dl);
    line_offset_.push_back(line_offset_.back() + dl[4]);
    supers_ += uint64_t(shape[0]) * shape[1] * shape[2] * shape[3];
  }
}

uint64_t SliceLayout::block_number(const BlockId& b) const {
  const Index4& g = grids_[b.section];
  return block_offset_[b.section] + ((uint64_t(b.block[0]) * g[1] + b.block[1]) * g[2] + b.block[2]) * g[3] + b.block[3];
}

BlockId SliceLayout::block(uint64_t number) const {
  if (number >= blocks()) throw Error(Errc::index_out_of_range, "block number out of range");
  const int s = int(std::upper_bound(block_offset_.begin(), block_offset_.end(), number) - block_offset_.begin()) - 1;
  uint64_t r = number - block_offset_[s];
  const Index4& g = grids_[s];
  BlockId b{slice_, s, {}};
  for (int i = 3; i >= 0; i--) {
    b.block[i] = int(r % g[i]);
    r /= g[i];
  }
  return b;
}

uint64_t SliceLayout::line_number(const LineId& l) const {
  const Index4& g = grids_[l.section];
  uint64_t r = 0;
  for (int i = 0; i < 4; i++)
    if (i != l.dim) r = r * g[i] + l.block[i];
  return line_offset_[l.section] + dim_line_offset_[l.section][l.dim] + r;
}

LineId SliceLayout::line(uint64_t number) const {
  if (number >= lines()) throw Error(Errc::index_out_of_range, "line number out of range");
  const int s = int(std::upper_bound(line_offset_.begin(), line_offset_.end(), number) - line_offset_.begin()) - 1;
  uint64_t r = number - line_offset_[s];
  const auto& dl = dim_line_offset_[s];
  int d = 0;
  while (r >= dl[d + 1]) d++;
  r -= dl[d];
  const Index4& g = grids_[s];
  LineId l{slice_, s, d, {}};
  for (int i = 3; i >= 0; i--) {
    if (i == d) continue;
    l.block[i] = int(r % g[i]);
    r /= g[i];
  }
  return l;
}

LayoutTotals layout_totals() {
  LayoutTotals t;
  for (int n = 0; n <= 36; n++) {
    const SliceLayout layout(n);
    t.blocks += layout.blocks();
    t.lines += layout.lines();
    t.supers += layout.supers();
    if (layout.sections().size() > t.max_sections) {
      t.max_sections = layout.sections().size();
      t.max_sections_slice = n;
    }
  }
  return t;
}

}  // namespace pentago
