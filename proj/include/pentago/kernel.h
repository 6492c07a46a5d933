#pragma once

// Per-line retrograde step: values of every parent super on a block line from
// the child line holding all of its placements along that axis.

#include <functional>
#include <optional>
#include <vector>

#include "pentago/layout.h"
#include "pentago/super.h"

namespace pentago {

struct ChildLine {
  LineId line;
  GlobalSym d;  // standardizes the child section
};

// Child line of a parent line.  Empty when the axis quadrant is full, or when
// the children have 36 stones and are evaluated directly.
std::optional<ChildLine> child_line(const LineId& parent);
bool line_has_children(const LineId& parent);

// Blocks of the child line, indexed by block coordinate along its axis.  An
// empty vector marks a block that was not supplied.
using LineInput = std::vector<std::vector<SuperValue>>;

// Restricts a line to some parent supers; the others come out as all-loss.
using SuperFilter = std::function<bool(const Index4& index)>;

// Values contributed along the line's axis to the parent blocks with the given
// block coordinates (all blocks when coords is empty), in that order.
std::vector<std::vector<SuperValue>> compute_line(const LineId& parent, const LineInput& input,
                                                  const std::vector<int>& coords = {},
                                                  const SuperFilter& keep = nullptr);

// Where the kernel reads the child of board b after the mover places at x,
// given the element d standardizing the child section: the child index and the
// h with h·(b + x) == board_at(child section, index).
struct MappedChild {
  Index4 index{};
  GroupElem h;
};
MappedChild map_child(Board b, Cell x, GlobalSym d);

}  // namespace pentago
