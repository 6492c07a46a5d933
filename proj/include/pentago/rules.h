#pragma once

// Board representation, move generation and the symmetry group.
//
// Conventions (every other module relies on these):
//   cell (x, y): x is the column 0..5, y the row 0..5 with y pointing up.
//   quadrant q = 2*(x/3) + y/3, local index = 3*(x%3) + y%3.
//   quadrant code: base-3 digits over the 9 local indices (0 empty, 1 black,
//     2 white), local index 0 least significant.
//   board key: four 16-bit quadrant codes, quadrant 0 least significant.
//   bitboards: bit 9*q + local.
//   local rotation: counterclockwise quarter turns of one quadrant; in local
//     coordinates (i, j) -> (2-j, i).
//   global symmetry index k + 4*f acts as rot^k after refl^f, where refl is the
//     transpose (x, y) -> (y, x) and rot the counterclockwise board turn
//     (x, y) -> (5-y, x).
//   group element (local l, global d) acts as d after l.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pentago/error.h"

namespace pentago {

enum class Color : uint8_t { black = 0, white = 1 };

constexpr Color other(Color c) { return c == Color::black ? Color::white : Color::black; }
const char* color_name(Color c);

enum class Value : int8_t { loss = -1, tie = 0, win = 1 };

constexpr Value operator-(Value v) { return Value(-int(v)); }
const char* value_name(Value v);

struct Cell {
  int x = 0;
  int y = 0;

  constexpr int quadrant() const { return 2 * (x / 3) + y / 3; }
  constexpr int local() const { return 3 * (x % 3) + y % 3; }
  constexpr int bit() const { return 9 * quadrant() + local(); }
  static constexpr Cell from_bit(int bit) {
    const int q = bit / 9, l = bit % 9;
    return Cell{3 * (q >> 1) + l / 3, 3 * (q & 1) + l % 3};
  }
  constexpr bool operator==(const Cell&) const = default;
};

inline constexpr int kQuadrantStates = 19683;  // 3^9
inline constexpr uint64_t kFullMask = (uint64_t(1) << 36) - 1;

class Board {
 public:
  constexpr Board() = default;

  // Throws invalid_argument unless all four fields hold valid quadrant codes.
  static Board from_key(uint64_t key);
  static Board from_quadrants(const std::array<uint16_t, 4>& codes);
  // Bitboards in the 9*q + local layout; must be disjoint.
  static Board from_sides(uint64_t black, uint64_t white);

  constexpr uint64_t key() const { return key_; }
  constexpr uint16_t quadrant(int q) const { return uint16_t(key_ >> (16 * q)); }
  std::array<uint16_t, 4> quadrants() const;

  int at(Cell c) const;  // 0 empty, 1 black, 2 white
  uint64_t side(Color c) const;
  uint64_t empty() const { return kFullMask & ~(side(Color::black) | side(Color::white)); }
  int count(Color c) const;
  int stones() const;
  Color to_move() const { return count(Color::black) == count(Color::white) ? Color::black : Color::white; }
  // Black moves first: black - white is 0 or 1.
  bool valid_position() const;

  constexpr auto operator<=>(const Board&) const = default;

 private:
  constexpr explicit Board(uint64_t key) : key_(key) {}
  uint64_t key_ = 0;
};

// 36-character form, rows y = 5 down to 0, columns x = 0..5 within a row.
std::string to_string(Board b);
// Accepts the 36-character form or a decimal key.
Board parse_board(std::string_view text);

struct LocalRot {
  uint8_t index = 0;  // r0 + 4 r1 + 16 r2 + 64 r3

  static constexpr LocalRot from(int r0, int r1, int r2, int r3) {
    return LocalRot{uint8_t((r0 & 3) | (r1 & 3) << 2 | (r2 & 3) << 4 | (r3 & 3) << 6)};
  }
  static constexpr LocalRot single(int q, int turns) { return LocalRot{uint8_t((turns & 3) << (2 * q))}; }
  constexpr int r(int q) const { return (index >> (2 * q)) & 3; }
  constexpr bool operator==(const LocalRot&) const = default;
};

LocalRot operator+(LocalRot a, LocalRot b);
LocalRot operator-(LocalRot a);

struct GlobalSym {
  uint8_t index = 0;  // turns + 4 * reflected

  constexpr int turns() const { return index & 3; }
  constexpr bool reflected() const { return index >> 2; }
  static constexpr GlobalSym make(int turns, bool reflect) { return GlobalSym{uint8_t((turns & 3) | (reflect ? 4 : 0))}; }
  constexpr bool operator==(const GlobalSym&) const = default;
};

GlobalSym operator*(GlobalSym a, GlobalSym b);  // a after b
GlobalSym inverse(GlobalSym d);
// Quadrant that quadrant q is carried to by d.
int quadrant_image(GlobalSym d, int q);
// d^-1 l d, an element of L.
LocalRot conjugate(GlobalSym d, LocalRot l);

struct GroupElem {
  LocalRot local;
  GlobalSym global;

  constexpr bool operator==(const GroupElem&) const = default;
  static constexpr GroupElem identity() { return GroupElem{}; }
  static constexpr GroupElem from_index(int i) { return GroupElem{LocalRot{uint8_t(i & 255)}, GlobalSym{uint8_t(i >> 8)}}; }
  constexpr int index() const { return local.index | global.index << 8; }
};

inline constexpr int kGroupOrder = 2048;

GroupElem operator*(const GroupElem& a, const GroupElem& b);  // a after b
GroupElem inverse(const GroupElem& g);
Cell transform_cell(const GroupElem& g, Cell c);

Board place(Board b, Cell c, Color color);
bool won(Board b, Color c);
// Static value for the side to move when the game is over, otherwise empty.
std::optional<Value> terminal_value(Board b);
Value static_value(Board b, Color c);  // f_c - f_other

struct Rotation {
  uint8_t quadrant = 0;
  int8_t direction = 1;  // +1 left (counterclockwise), -1 right
  constexpr bool operator==(const Rotation&) const = default;
};

struct Move {
  Cell cell;
  std::optional<Rotation> rotation;  // absent when the placement wins at once
  constexpr bool operator==(const Move&) const = default;
};

struct Successor {
  Board board;
  Move move;
};

std::vector<Successor> moves(Board b);
Board apply_move(Board b, const Move& m);
std::string to_string(const Move& m);

Board transform_board(const GroupElem& g, Board b);
Board rotate_quadrant(Board b, int q, int turns);

struct Canonical {
  Board board;
  GroupElem g;  // g * input == board
};

// Minimal key over all 2048 images.
Canonical canonicalize(Board b);
// Minimal key over the 8 global symmetries only (the exact symmetries of the game).
Canonical canonicalize_global(Board b);

// 32 five-in-a-row windows as bitboards.
const std::array<uint64_t, 32>& win_windows();

namespace detail {

// Per-quadrant lookup tables shared by the rest of the library.
struct QuadrantTables {
  std::array<uint16_t, kQuadrantStates> black{}, white{};  // 9-bit patterns per code
  std::array<uint16_t, 512> ternary{};                     // pattern -> sum of 3^i
  std::array<std::array<uint16_t, kQuadrantStates>, 4> rotate{};
  std::array<uint16_t, kQuadrantStates> reflect{};
  std::array<uint16_t, kQuadrantStates> rmin{};
  std::array<uint8_t, kQuadrantStates> rmin_turns{};  // rotate[rmin_turns[c]][c] == rmin[c]
  std::array<std::array<uint16_t, 512>, 4> rotate_bits{};

  uint16_t code(uint16_t black_bits, uint16_t white_bits) const {
    return uint16_t(ternary[black_bits] + 2 * ternary[white_bits]);
  }
  // Content map of a global symmetry on one quadrant.
  uint16_t global(GlobalSym d, uint16_t c) const { return rotate[d.turns()][d.reflected() ? reflect[c] : c]; }
};

const QuadrantTables& quadrant_tables();

}  // namespace detail
}  // namespace pentago
