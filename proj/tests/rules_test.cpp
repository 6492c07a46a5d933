#include <set>

#include "doctest.h"
#include "oracles.h"
#include "pentago/rules.h"

using namespace pentago;

TEST_CASE("place encodes a single stone") {
  const Board b = place(Board{}, {0, 0}, Color::black);
  CHECK(b.quadrant(0) == 1);
  CHECK(b.key() == 1);
  CHECK_THROWS_AS(place(b, {0, 0}, Color::white), Error);
  try {
    place(b, {0, 0}, Color::white);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::occupied_cell);
  }
  try {
    place(b, {1, 0}, Color::black);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::wrong_turn);
  }
}

TEST_CASE("place changes exactly one cell") {
  std::mt19937_64 rng(1);
  for (int it = 0; it < 100000; it++) {
    const Board b = oracle::random_board(rng, int(rng() % 36));
    const auto before = oracle::decode(b.key());
    std::vector<Cell> empty;
    for (int x = 0; x < 6; x++)
      for (int y = 0; y < 6; y++)
        if (!before[x][y]) empty.push_back({x, y});
    const Cell c = empty[rng() % empty.size()];
    const Color col = b.to_move();
    const auto after = oracle::decode(place(b, c, col).key());
    for (int x = 0; x < 6; x++)
      for (int y = 0; y < 6; y++) {
        if (x == c.x && y == c.y)
          REQUIRE(after[x][y] == (col == Color::black ? 1 : 2));
        else
          REQUIRE(after[x][y] == before[x][y]);
      }
  }
}

TEST_CASE("winning windows") {
  CHECK(!won(Board{}, Color::black));
  Board b;
  for (int x = 0; x < 5; x++) {
    b = place(b, {x, 0}, Color::black);
    if (x < 4) b = place(b, {x, 5}, Color::white);
  }
  CHECK(won(b, Color::black));
  CHECK(!won(b, Color::white));
  std::set<uint64_t> distinct(win_windows().begin(), win_windows().end());
  CHECK(distinct.size() == 32);
  for (uint64_t w : win_windows()) CHECK(std::popcount(w) == 5);
}

TEST_CASE("won agrees with a grid scan") {
  std::mt19937_64 rng(2);
  for (int it = 0; it < 1000000; it++) {
    const Board b = oracle::random_board(rng, 10 + int(rng() % 27));
    const auto g = oracle::decode(b.key());
    REQUIRE(won(b, Color::black) == oracle::won(g, 1));
    REQUIRE(won(b, Color::white) == oracle::won(g, 2));
  }
}

TEST_CASE("terminal adjudication") {
  CHECK(!terminal_value(Board{}));
  // both sides have five: tie
  const Board both = parse_board(
      "111110"
      "222220"
      "000000"
      "000000"
      "000000"
      "000000");
  CHECK(terminal_value(both) == Value::tie);
  // only the side not to move has five: loss
  const Board black_five = parse_board(
      "111110"
      "222200"
      "000000"
      "000000"
      "000000"
      "000000");
  REQUIRE(black_five.to_move() == Color::white);
  CHECK(terminal_value(black_five) == Value::loss);
  // full board without five
  const Board full = parse_board(
      "121212"
      "121212"
      "212121"
      "212121"
      "121212"
      "121212");
  CHECK(full.stones() == 36);
  CHECK(!won(full, Color::black));
  CHECK(!won(full, Color::white));
  CHECK(terminal_value(full) == Value::tie);
}

TEST_CASE("move generation") {
  CHECK(moves(Board{}).size() == 288);
  // black can finish a row by placing at (4,0)
  const Board b = parse_board(
      "000000"
      "000000"
      "000000"
      "222200"
      "000000"
      "111100");
  int at = 0;
  for (const auto& s : moves(b)) {
    if (s.move.cell == Cell{4, 0}) {
      at++;
      CHECK(!s.move.rotation);
      CHECK(won(s.board, Color::black));
    }
    CHECK(s.board.stones() == b.stones() + 1);
    CHECK(s.board.to_move() != b.to_move());
    CHECK(apply_move(b, s.move) == s.board);
  }
  CHECK(at == 1);
  // drop one white stone from a drawn full board
  const Board almost = parse_board(
      "121212"
      "121212"
      "212121"
      "212121"
      "121212"
      "12121" "0");
  REQUIRE(almost.stones() == 35);
  REQUIRE(!terminal_value(almost));
  CHECK(moves(almost).size() == 8);
  const Board five = parse_board(
      "111110"
      "222200"
      "000000"
      "000000"
      "000000"
      "000000");
  CHECK_THROWS_AS(moves(five), Error);
}

TEST_CASE("board text forms") {
  std::mt19937_64 rng(4);
  for (int it = 0; it < 1000; it++) {
    const Board b = oracle::random_board(rng, int(rng() % 37));
    CHECK(parse_board(to_string(b)) == b);
    CHECK(parse_board(std::to_string(b.key())) == b);
  }
  CHECK(to_string(place(Board{}, {0, 5}, Color::black)).front() == '1');
  CHECK(to_string(place(Board{}, {5, 0}, Color::black)).back() == '1');
  CHECK_THROWS_AS(parse_board("xyz"), Error);
  CHECK_THROWS_AS(parse_board(""), Error);
  CHECK_THROWS_AS(parse_board(std::to_string(uint64_t(19683))), Error);
}

TEST_CASE("global symmetry table") {
  // cell-level composition defines the expected product
  auto apply = [](GlobalSym d, Cell c) { return transform_cell(GroupElem{LocalRot{}, d}, c); };
  for (int a = 0; a < 8; a++)
    for (int b = 0; b < 8; b++) {
      const GlobalSym da{uint8_t(a)}, db{uint8_t(b)};
      for (int bit = 0; bit < 36; bit++) {
        const Cell c = Cell::from_bit(bit);
        REQUIRE(apply(da * db, c) == apply(da, apply(db, c)));
      }
      CHECK((da * inverse(da)) == GlobalSym{});
    }
  // the reflection is the transpose
  CHECK(apply(GlobalSym::make(0, true), Cell{1, 4}) == Cell{4, 1});
  CHECK(apply(GlobalSym::make(1, false), Cell{0, 0}) == Cell{5, 0});
}

TEST_CASE("group product matches composition of cell maps") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 20000; it++) {
    const GroupElem a = GroupElem::from_index(int(rng() % kGroupOrder));
    const GroupElem b = GroupElem::from_index(int(rng() % kGroupOrder));
    for (int bit = 0; bit < 36; bit++) {
      const Cell c = Cell::from_bit(bit);
      REQUIRE(transform_cell(a * b, c) == transform_cell(a, transform_cell(b, c)));
      REQUIRE(transform_cell(inverse(a), transform_cell(a, c)) == c);
    }
  }
}

TEST_CASE("transform_board is the group action") {
  const Board lone = place(Board{}, {0, 0}, Color::black);
  const Board turned = transform_board(GroupElem{LocalRot::single(0, 1), GlobalSym{}}, lone);
  CHECK(turned.quadrant(0) == 729);  // 3^6: local index 6
  CHECK(Cell{2, 0}.local() == 6);

  std::mt19937_64 rng(6);
  for (int it = 0; it < 10000; it++) {
    const Board b = oracle::random_board(rng, int(rng() % 37));
    CHECK(transform_board(GroupElem::identity(), b) == b);
    const GroupElem g1 = GroupElem::from_index(int(rng() % kGroupOrder));
    const GroupElem g2 = GroupElem::from_index(int(rng() % kGroupOrder));
    REQUIRE(transform_board(g1, transform_board(g2, b)) == transform_board(g1 * g2, b));
    const Board img = transform_board(g1, b);
    REQUIRE(img.key() == oracle::apply_key(g1.local.index, g1.global.index, b.key()));
    REQUIRE(img.count(Color::black) == b.count(Color::black));
    REQUIRE(img.count(Color::white) == b.count(Color::white));
  }
}

TEST_CASE("adjudication is invariant under the eight board symmetries") {
  std::mt19937_64 rng(7);
  int local_changes = 0;
  for (int it = 0; it < 20000; it++) {
    const Board b = oracle::random_board(rng, 9 + int(rng() % 28));
    for (int d = 0; d < 8; d++)
      REQUIRE(terminal_value(transform_board(GroupElem{LocalRot{}, GlobalSym{uint8_t(d)}}, b)) == terminal_value(b));
    const GroupElem g = GroupElem::from_index(int(rng() % kGroupOrder));
    if (terminal_value(transform_board(g, b)) != terminal_value(b)) local_changes++;
  }
  // quadrant turns are only approximate symmetries: they can make or break a five
  CHECK(local_changes > 0);
}

TEST_CASE("canonicalize") {
  const Canonical e = canonicalize(Board{});
  CHECK(e.board == Board{});
  CHECK(e.g == GroupElem::identity());
  std::mt19937_64 rng(8);
  for (int it = 0; it < 100000; it++) {
    const Board b = oracle::random_board(rng, int(rng() % 37));
    const Canonical c = canonicalize(b);
    REQUIRE(transform_board(c.g, b) == c.board);
    REQUIRE(c.board.key() <= b.key());
    REQUIRE(canonicalize(c.board).board == c.board);
    const GroupElem g = GroupElem::from_index(int(rng() % kGroupOrder));
    REQUIRE(canonicalize(transform_board(g, b)).board == c.board);
    if (c.board == b) REQUIRE(canonicalize(b).board.key() == b.key());
  }
  // exhaustive minimality on a few boards
  for (int it = 0; it < 50; it++) {
    const Board b = oracle::random_board(rng, int(rng() % 37));
    uint64_t best = b.key();
    for (int i = 0; i < kGroupOrder; i++) best = std::min(best, transform_board(GroupElem::from_index(i), b).key());
    CHECK(canonicalize(b).board.key() == best);
    const Canonical cg = canonicalize_global(b);
    CHECK(transform_board(cg.g, b) == cg.board);
  }
}
