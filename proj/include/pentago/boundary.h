#pragma once

// Boundary data for a solve: the real 36-stone terminals, or deterministic
// pseudorandom values injected at a small slice.

#include <cstdint>
#include <string>
#include <vector>

#include "pentago/layout.h"
#include "pentago/super.h"

namespace pentago {

struct BoundarySpec {
  enum class Mode { real_terminal, injected };
  Mode mode = Mode::real_terminal;
  uint64_t seed = 0;

  static BoundarySpec terminal() { return {}; }
  static BoundarySpec random(uint64_t seed) { return {Mode::injected, seed}; }
  // "terminal" or "random:SEED".
  static BoundarySpec parse(const std::string& text);
  std::string to_string() const;
};

// Value of b for the side to move under an injected boundary: the static value
// when the game is over, otherwise uniform over {-1, 0, 1} and equal on boards
// related by the eight board symmetries.
Value injected_value(uint64_t seed, Board b);
SuperValue injected_super(uint64_t seed, Board b);
std::vector<SuperValue> inject_block(uint64_t seed, const BlockId& block);

}  // namespace pentago
