#pragma once

// Serial retrograde solver for the positions below one root.  Slice k holds
// every board obtained by filling k - n of the root's empty cells (n = stones
// of the root), indexed by the colex rank of the filled cells and then of the
// black cells among them.  Rotations enter only through rmax, so each slice
// stores the half of every super whose rotation parity it will be read at.

#include <cstdint>
#include <vector>

#include "pentago/rules.h"
#include "pentago/super.h"

namespace pentago {

// A RotSet restricted to one rotation parity, packed into 128 bits.
struct HalfRotSet {
  std::array<uint64_t, 2> w{};
  bool operator==(const HalfRotSet&) const = default;
};

// Parity 1 holds the rotations with odd r0 + r1 + r2 + r3.
HalfRotSet halve(const RotSet& s, int parity);
RotSet expand(const HalfRotSet& h, int parity);

// Boards at slice k below root (C(e, k - n) C(k - n, added black)).
uint64_t supported_count(Board root, int k);
// Peak bytes for solving below root.
uint64_t midgame_memory_estimate(Board root);

struct MidgameOptions {
  int threshold = 17;                       // fewest root stones accepted
  uint64_t memory_budget = uint64_t(5) << 29;
  bool keep_slices = false;                 // retain every slice for inspection
};

struct MoveValue {
  Move move;
  Board child;
  Value value;  // for the player making the move
};

struct MidgameResult {
  Board root;
  Value value = Value::loss;
  std::vector<MoveValue> moves;  // in the order of moves(root)
  uint64_t boards = 0;
  double seconds = 0;
};

class MidgameSolver {
 public:
  MidgameSolver(Board root, MidgameOptions options = {});
  ~MidgameSolver();
  MidgameSolver(const MidgameSolver&) = delete;
  MidgameSolver& operator=(const MidgameSolver&) = delete;

  MidgameResult solve();

  // Stored parity of slice k.
  int parity(int k) const;
  // Stored half of a supported board's super, expanded (the other parity reads
  // as loss).  Needs keep_slices, or k = root + 1.
  SuperValue stored(Board b) const;

 private:
  struct Impl;
  Impl* impl_;
};

MidgameResult solve_midgame(Board root, const MidgameOptions& options = {});

}  // namespace pentago
