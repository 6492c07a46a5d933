#pragma once

// 256-bit predicates over the local rotation group L and the two-bit value
// encoding built from them.  Bit index of (r0, r1, r2, r3) is
// r0 + 4 r1 + 16 r2 + 64 r3, so word k of a RotSet holds the rotations with r3 = k.

#include <array>
#include <cstdint>
#include <span>

#include "pentago/rules.h"

namespace pentago {

struct RotSet {
  std::array<uint64_t, 4> w{};

  static constexpr RotSet all() { return RotSet{{~0ull, ~0ull, ~0ull, ~0ull}}; }
  static RotSet single(LocalRot g) {
    RotSet s;
    s.set(g.index);
    return s;
  }

  bool test(int i) const { return w[i >> 6] >> (i & 63) & 1; }
  void set(int i) { w[i >> 6] |= uint64_t(1) << (i & 63); }
  bool empty() const { return !(w[0] | w[1] | w[2] | w[3]); }
  int count() const;

  RotSet operator|(const RotSet& o) const { return {{w[0] | o.w[0], w[1] | o.w[1], w[2] | o.w[2], w[3] | o.w[3]}}; }
  RotSet operator&(const RotSet& o) const { return {{w[0] & o.w[0], w[1] & o.w[1], w[2] & o.w[2], w[3] & o.w[3]}}; }
  RotSet operator~() const { return {{~w[0], ~w[1], ~w[2], ~w[3]}}; }
  RotSet& operator|=(const RotSet& o) { return *this = *this | o; }
  RotSet& operator&=(const RotSet& o) { return *this = *this & o; }
  bool operator==(const RotSet&) const = default;
};

struct SuperValue {
  RotSet win;
  RotSet notloss;

  static SuperValue constant(Value v) {
    return {v == Value::win ? RotSet::all() : RotSet{}, v != Value::loss ? RotSet::all() : RotSet{}};
  }
  Value at(int i) const { return win.test(i) ? Value::win : notloss.test(i) ? Value::tie : Value::loss; }
  void assign(int i, Value v);
  bool well_formed() const { return (win & ~notloss).empty(); }
  bool operator==(const SuperValue&) const = default;
};

inline constexpr size_t kSuperBytes = 64;

// Per-rotation max over the 8 single-quadrant quarter turns.
RotSet rmax(const RotSet& s);
// Rotations whose board (all quadrants turned by that element) has five for c.
RotSet super_wins(Board b, Color c);
// Rotations g such that some empty cell x of quadrant q (any quadrant when q < 0)
// gives g·(b + x) five for c.
RotSet placement_wins(Board b, Color c, int q = -1);
struct MoverWins {
  RotSet wins;        // super_wins(b, c)
  RotSet placements;  // placement_wins(b, c)
};
MoverWins mover_wins(Board b, Color c);

// Image of a super of b as a super of g·b.
RotSet transform_super(const GroupElem& g, const RotSet& s);
SuperValue transform_super(const GroupElem& g, const SuperValue& v);

SuperValue negate_value(const SuperValue& v);
SuperValue merge_value(const SuperValue& a, const SuperValue& b);

// Game-over rotations of b (five for either side) hold their static value.
SuperValue adjudicate_terminals(const SuperValue& v, const RotSet& mover_wins, const RotSet& other_wins);
// Static values of a 36-stone board for the side to move.
SuperValue full_board_value(Board b);

void write_super(const SuperValue& v, std::span<uint8_t, kSuperBytes> out);
SuperValue read_super(std::span<const uint8_t, kSuperBytes> in);

// Rotations r with r0 + r1 + r2 + r3 odd.
RotSet odd_rotations();

namespace detail {
// {g : g.r(q) in nibble}
const RotSet& quadrant_rotation_mask(int q, int nibble);
}  // namespace detail

}  // namespace pentago
