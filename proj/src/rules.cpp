#include "pentago/rules.h"

#include <algorithm>
#include <bit>
#include <charconv>

namespace pentago {

const char* color_name(Color c) { return c == Color::black ? "black" : "white"; }

const char* value_name(Value v) {
  switch (v) {
    case Value::win: return "win";
    case Value::tie: return "tie";
    case Value::loss: return "loss";
  }
  return "?";
}

namespace detail {
namespace {

QuadrantTables build_tables() {
  QuadrantTables t;
  int pow3[9];
  pow3[0] = 1;
  for (int i = 1; i < 9; i++) pow3[i] = 3 * pow3[i - 1];
  for (int p = 0; p < 512; p++) {
    int s = 0;
    for (int i = 0; i < 9; i++)
      if (p >> i & 1) s += pow3[i];
    t.ternary[p] = uint16_t(s);
  }
  // Local (i, j) = (idx / 3, idx % 3); one counterclockwise turn sends (i, j) to (2-j, i).
  int rot1[9], refl[9];
  for (int idx = 0; idx < 9; idx++) {
    const int i = idx / 3, j = idx % 3;
    rot1[idx] = 3 * (2 - j) + i;
    refl[idx] = 3 * j + i;
  }
  for (int k = 0; k < 4; k++) {
    for (int p = 0; p < 512; p++) {
      int q = p;
      for (int s = 0; s < k; s++) {
        int r = 0;
        for (int idx = 0; idx < 9; idx++)
          if (q >> idx & 1) r |= 1 << rot1[idx];
        q = r;
      }
      t.rotate_bits[k][p] = uint16_t(q);
    }
  }
  std::array<uint16_t, 512> refl_bits{};
  for (int p = 0; p < 512; p++) {
    int r = 0;
    for (int idx = 0; idx < 9; idx++)
      if (p >> idx & 1) r |= 1 << refl[idx];
    refl_bits[p] = uint16_t(r);
  }
  for (int c = 0; c < kQuadrantStates; c++) {
    int b = 0, w = 0, x = c;
    for (int idx = 0; idx < 9; idx++, x /= 3) {
      if (x % 3 == 1) b |= 1 << idx;
      if (x % 3 == 2) w |= 1 << idx;
    }
    t.black[c] = uint16_t(b);
    t.white[c] = uint16_t(w);
  }
  for (int c = 0; c < kQuadrantStates; c++) {
    const int b = t.black[c], w = t.white[c];
    for (int k = 0; k < 4; k++) t.rotate[k][c] = t.code(t.rotate_bits[k][b], t.rotate_bits[k][w]);
    t.reflect[c] = t.code(refl_bits[b], refl_bits[w]);
    uint16_t best = uint16_t(c);
    uint8_t turns = 0;
    for (int k = 1; k < 4; k++)
      if (t.rotate[k][c] < best) best = t.rotate[k][c], turns = uint8_t(k);
    t.rmin[c] = best;
    t.rmin_turns[c] = turns;
  }
  return t;
}

std::array<uint64_t, 32> build_windows() {
  std::array<uint64_t, 32> w{};
  int n = 0;
  const int dirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  for (auto& d : dirs) {
    for (int x0 = 0; x0 < 6; x0++) {
      for (int y0 = 0; y0 < 6; y0++) {
        const int x4 = x0 + 4 * d[0], y4 = y0 + 4 * d[1];
        if (x4 < 0 || x4 > 5 || y4 < 0 || y4 > 5) continue;
        uint64_t m = 0;
        for (int s = 0; s < 5; s++) m |= uint64_t(1) << Cell{x0 + s * d[0], y0 + s * d[1]}.bit();
        w[n++] = m;
      }
    }
  }
  return w;
}

}  // namespace

const QuadrantTables& quadrant_tables() {
  static const QuadrantTables tables = build_tables();
  return tables;
}

}  // namespace detail

const std::array<uint64_t, 32>& win_windows() {
  static const std::array<uint64_t, 32> windows = detail::build_windows();
  return windows;
}

Board Board::from_key(uint64_t key) {
  for (int q = 0; q < 4; q++)
    if (uint16_t(key >> (16 * q)) >= kQuadrantStates)
      throw Error(Errc::invalid_argument, "quadrant code out of range in key " + std::to_string(key));
  return Board(key);
}

Board Board::from_quadrants(const std::array<uint16_t, 4>& codes) {
  uint64_t key = 0;
  for (int q = 0; q < 4; q++) key |= uint64_t(codes[q]) << (16 * q);
  return from_key(key);
}

Board Board::from_sides(uint64_t black, uint64_t white) {
  if (black & white || (black | white) & ~kFullMask) throw Error(Errc::invalid_argument, "overlapping or out-of-range sides");
  const auto& t = detail::quadrant_tables();
  uint64_t key = 0;
  for (int q = 0; q < 4; q++)
    key |= uint64_t(t.code(uint16_t(black >> (9 * q) & 511), uint16_t(white >> (9 * q) & 511))) << (16 * q);
  return Board(key);
}

std::array<uint16_t, 4> Board::quadrants() const {
  return {quadrant(0), quadrant(1), quadrant(2), quadrant(3)};
}

int Board::at(Cell c) const {
  const auto& t = detail::quadrant_tables();
  const uint16_t code = quadrant(c.quadrant());
  const int l = c.local();
  return (t.black[code] >> l & 1) ? 1 : (t.white[code] >> l & 1) ? 2 : 0;
}

uint64_t Board::side(Color c) const {
  const auto& t = detail::quadrant_tables();
  const auto& tab = c == Color::black ? t.black : t.white;
  uint64_t s = 0;
  for (int q = 0; q < 4; q++) s |= uint64_t(tab[quadrant(q)]) << (9 * q);
  return s;
}

int Board::count(Color c) const { return std::popcount(side(c)); }

int Board::stones() const { return count(Color::black) + count(Color::white); }

bool Board::valid_position() const {
  const int d = count(Color::black) - count(Color::white);
  return d == 0 || d == 1;
}

std::string to_string(Board b) {
  std::string s;
  s.reserve(36);
  for (int y = 5; y >= 0; y--)
    for (int x = 0; x < 6; x++) s.push_back(char('0' + b.at({x, y})));
  return s;
}

Board parse_board(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\n')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\n')) text.remove_suffix(1);
  if (text.size() == 36) {
    uint64_t black = 0, white = 0;
    for (int i = 0; i < 36; i++) {
      const char ch = text[i];
      if (ch < '0' || ch > '2') throw Error(Errc::invalid_argument, "bad board character in '" + std::string(text) + "'");
      const Cell c{i % 6, 5 - i / 6};
      if (ch == '1') black |= uint64_t(1) << c.bit();
      if (ch == '2') white |= uint64_t(1) << c.bit();
    }
    return Board::from_sides(black, white);
  }
  uint64_t key = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), key);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size())
    throw Error(Errc::invalid_argument, "cannot parse board '" + std::string(text) + "'");
  return Board::from_key(key);
}

LocalRot operator+(LocalRot a, LocalRot b) {
  return LocalRot::from(a.r(0) + b.r(0), a.r(1) + b.r(1), a.r(2) + b.r(2), a.r(3) + b.r(3));
}

LocalRot operator-(LocalRot a) { return LocalRot::from(-a.r(0), -a.r(1), -a.r(2), -a.r(3)); }

GlobalSym operator*(GlobalSym a, GlobalSym b) {
  // refl rot^k = rot^-k refl
  const int k = a.turns() + (a.reflected() ? -b.turns() : b.turns());
  return GlobalSym::make(k, a.reflected() != b.reflected());
}

GlobalSym inverse(GlobalSym d) {
  return d.reflected() ? d : GlobalSym::make(-d.turns(), false);
}

int quadrant_image(GlobalSym d, int q) {
  static constexpr int rot[4] = {2, 0, 3, 1};
  static constexpr int refl[4] = {0, 2, 1, 3};
  if (d.reflected()) q = refl[q];
  for (int k = 0; k < d.turns(); k++) q = rot[q];
  return q;
}

LocalRot conjugate(GlobalSym d, LocalRot l) {
  const int sign = d.reflected() ? -1 : 1;
  int r[4];
  for (int q = 0; q < 4; q++) r[q] = sign * l.r(quadrant_image(d, q));
  return LocalRot::from(r[0], r[1], r[2], r[3]);
}

GroupElem operator*(const GroupElem& a, const GroupElem& b) {
  return GroupElem{conjugate(b.global, a.local) + b.local, a.global * b.global};
}

GroupElem inverse(const GroupElem& g) {
  const GlobalSym di = inverse(g.global);
  return GroupElem{conjugate(di, -g.local), di};
}

Cell transform_cell(const GroupElem& g, Cell c) {
  const int X = c.x / 3, Y = c.y / 3;
  int i = c.x % 3, j = c.y % 3;
  for (int k = 0; k < g.local.r(c.quadrant()); k++) {
    const int ni = 2 - j, nj = i;
    i = ni, j = nj;
  }
  int x = 3 * X + i, y = 3 * Y + j;
  if (g.global.reflected()) std::swap(x, y);
  for (int k = 0; k < g.global.turns(); k++) {
    const int nx = 5 - y, ny = x;
    x = nx, y = ny;
  }
  return Cell{x, y};
}

Board place(Board b, Cell c, Color color) {
  if (c.x < 0 || c.x > 5 || c.y < 0 || c.y > 5) throw Error(Errc::invalid_argument, "cell out of range");
  if (b.at(c)) throw Error(Errc::occupied_cell, "cell (" + std::to_string(c.x) + "," + std::to_string(c.y) + ") is occupied");
  if (color != b.to_move()) throw Error(Errc::wrong_turn, std::string(color_name(color)) + " is not to move");
  static constexpr uint64_t pow3[9] = {1, 3, 9, 27, 81, 243, 729, 2187, 6561};
  const uint64_t add = (color == Color::black ? 1 : 2) * pow3[c.local()];
  return Board::from_key(b.key() + (add << (16 * c.quadrant())));
}

bool won(Board b, Color c) {
  const uint64_t s = b.side(c);
  for (uint64_t w : win_windows())
    if ((s & w) == w) return true;
  return false;
}

Value static_value(Board b, Color c) {
  return Value(int(won(b, c)) - int(won(b, other(c))));
}

std::optional<Value> terminal_value(Board b) {
  const Color c = b.to_move();
  const bool wc = won(b, c), wo = won(b, other(c));
  if (wc || wo || b.stones() == 36) return Value(int(wc) - int(wo));
  return std::nullopt;
}

Board rotate_quadrant(Board b, int q, int turns) {
  const auto& t = detail::quadrant_tables();
  auto codes = b.quadrants();
  codes[q] = t.rotate[turns & 3][codes[q]];
  return Board::from_quadrants(codes);
}

Board apply_move(Board b, const Move& m) {
  Board next = place(b, m.cell, b.to_move());
  if (m.rotation) next = rotate_quadrant(next, m.rotation->quadrant, m.rotation->direction);
  return next;
}

std::vector<Successor> moves(Board b) {
  if (terminal_value(b)) throw Error(Errc::terminal_position, "no moves from a finished game");
  const Color c = b.to_move();
  std::vector<Successor> out;
  const uint64_t empty = b.empty();
  out.reserve(8 * std::popcount(empty));
  for (int bit = 0; bit < 36; bit++) {
    if (!(empty >> bit & 1)) continue;
    const Cell cell = Cell::from_bit(bit);
    const Board placed = place(b, cell, c);
    if (won(placed, c)) {
      out.push_back({placed, Move{cell, std::nullopt}});
      continue;
    }
    for (int q = 0; q < 4; q++)
      for (int dir : {1, -1})
        out.push_back({rotate_quadrant(placed, q, dir), Move{cell, Rotation{uint8_t(q), int8_t(dir)}}});
  }
  return out;
}

std::string to_string(const Move& m) {
  std::string s = "place " + std::to_string(m.cell.x) + "," + std::to_string(m.cell.y);
  if (m.rotation)
    s += " rotate " + std::to_string(m.rotation->quadrant) + (m.rotation->direction > 0 ? " left" : " right");
  return s;
}

Board transform_board(const GroupElem& g, Board b) {
  const auto& t = detail::quadrant_tables();
  std::array<uint16_t, 4> out{};
  for (int q = 0; q < 4; q++)
    out[quadrant_image(g.global, q)] = t.global(g.global, t.rotate[g.local.r(q)][b.quadrant(q)]);
  return Board::from_quadrants(out);
}

Canonical canonicalize(Board b) {
  const auto& t = detail::quadrant_tables();
  Canonical best{b, GroupElem::identity()};
  bool first = true;
  for (int di = 0; di < 8; di++) {
    const GlobalSym d{uint8_t(di)};
    const int sign = d.reflected() ? -1 : 1;
    std::array<uint16_t, 4> out{};
    int r[4];
    for (int q = 0; q < 4; q++) {
      const uint16_t img = t.global(d, b.quadrant(q));
      out[quadrant_image(d, q)] = t.rmin[img];
      // rotating after d equals d after rotating the other way when d reflects
      r[q] = sign * t.rmin_turns[img];
    }
    const Board cand = Board::from_quadrants(out);
    if (first || cand.key() < best.board.key()) {
      best = {cand, GroupElem{LocalRot::from(r[0], r[1], r[2], r[3]), d}};
      first = false;
    }
  }
  return best;
}

Canonical canonicalize_global(Board b) {
  Canonical best{b, GroupElem::identity()};
  for (int di = 1; di < 8; di++) {
    const GroupElem g{LocalRot{}, GlobalSym{uint8_t(di)}};
    const Board cand = transform_board(g, b);
    if (cand.key() < best.board.key()) best = {cand, g};
  }
  return best;
}

}  // namespace pentago
