#pragma once

// Sections, rotation-minimal quadrant dictionaries, block grids and block lines.
//
// A section fixes the (black, white) count of every quadrant.  Its supers form a
// 4-D array whose axis i indexes the dictionary of quadrant i, cut into 8^4
// blocks.  A block line is every block along one axis with the other three
// block coordinates fixed.  Sections of a slice are the D4-minimal count tuples
// in lexicographic order; lines are numbered section by section, then by axis,
// then lexicographically by the remaining block coordinates.

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pentago/rules.h"

namespace pentago {

inline constexpr int kBlockSize = 8;

struct Section {
  std::array<std::array<uint8_t, 2>, 4> counts{};  // (black, white) per quadrant

  int black() const { return counts[0][0] + counts[1][0] + counts[2][0] + counts[3][0]; }
  int white() const { return counts[0][1] + counts[1][1] + counts[2][1] + counts[3][1]; }
  int slice() const { return black() + white(); }
  bool valid() const;
  // Counts of d·b for any board b of this section.
  Section transform(GlobalSym d) const;
  Color to_move() const { return black() == white() ? Color::black : Color::white; }

  auto operator<=>(const Section&) const = default;
};

Section section_of(Board b);
std::string to_string(const Section& s);

// Minimal image under D4 and the element producing it.
std::pair<Section, GlobalSym> standardize_section(const Section& s);
const std::vector<Section>& sections_of_slice(int n);
// Index into sections_of_slice, or -1 when s is not a listed section.
int section_index(const Section& s);

struct QuadDict {
  int black = 0, white = 0;
  std::vector<uint16_t> states;   // rotation-minimal codes
  std::vector<uint8_t> orbit;     // size of each state's rotation orbit
  std::vector<uint32_t> partner;  // index of the rotation-minimal reflection
  int size() const { return int(states.size()); }
};

const QuadDict& quad_states(int black, int white);
// Index of rmin(code) inside its dictionary.
int dict_index(uint16_t code);

using Index4 = std::array<int, 4>;

Index4 section_shape(const Section& s);
Index4 block_grid(const Section& s);
// Extent of block coordinate i along one axis of length dim.
inline int block_extent(int dim, int i) { return std::min(kBlockSize, dim - kBlockSize * i); }

Board board_at(const Section& s, const Index4& idx);

struct Located {
  Section section;
  Index4 index{};
  GroupElem g;  // g·board == board_at(section, index)
};

// Canonical location: among the symmetries reaching the minimal section the one
// with the smallest index tuple.
Located locate(Board b);

// Child section after c places in quadrant q, and the D4 element standardizing it.
std::pair<Section, GlobalSym> child_section(const Section& s, int q, Color c);

struct BlockId {
  int slice = 0;
  int section = 0;  // index in sections_of_slice(slice)
  Index4 block{};
  auto operator<=>(const BlockId&) const = default;
};

struct LineId {
  int slice = 0;
  int section = 0;
  int dim = 0;
  Index4 block{};  // block[dim] is zero
  auto operator<=>(const LineId&) const = default;
};

std::string to_string(const BlockId& b);
std::string to_string(const LineId& l);

int block_supers(const BlockId& b);
int line_length(const LineId& l);  // blocks along the line
BlockId line_block(const LineId& l, int i);
uint64_t line_supers(const LineId& l);

// Per-slice enumeration of blocks and lines in the documented order.
class SliceLayout {
 public:
  explicit SliceLayout(int slice);

  int slice() const { return slice_; }
  const std::vector<Section>& sections() const { return *sections_; }
  uint64_t blocks() const { return block_offset_.back(); }
  uint64_t lines() const { return line_offset_.back(); }
  uint64_t supers() const { return supers_; }

  uint64_t block_number(const BlockId& b) const;
  BlockId block(uint64_t number) const;
  uint64_t line_number(const LineId& l) const;
  LineId line(uint64_t number) const;
  uint64_t section_block_offset(int section) const { return block_offset_[section]; }
  uint64_t section_line_offset(int section) const { return line_offset_[section]; }

 private:
  int slice_;
  const std::vector<Section>* sections_;
  std::vector<Index4> grids_;
  std::vector<uint64_t> block_offset_;  // per section, plus total
  std::vector<uint64_t> line_offset_;
  std::vector<std::array<uint64_t, 5>> dim_line_offset_;
  uint64_t supers_ = 0;
};

struct LayoutTotals {
  uint64_t blocks = 0;
  uint64_t lines = 0;
  uint64_t supers = 0;
  size_t max_sections = 0;
  int max_sections_slice = 0;
};

// Over all slices 0..36 and all four axes of every section.
LayoutTotals layout_totals();

}  // namespace pentago
