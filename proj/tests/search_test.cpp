#include "doctest.h"
#include "oracles.h"
#include "pentago/search.h"

using namespace pentago;

namespace {

Board random_root(std::mt19937_64& rng, int n) {
  for (;;) {
    const Board b = oracle::random_board(rng, n);
    if (!terminal_value(b)) return b;
  }
}

}  // namespace

TEST_CASE("an immediate five wins") {
  Board b;
  for (int y = 0; y < 4; y++) {
    b = place(b, {0, y}, Color::black);
    b = place(b, {5, y}, Color::white);
  }
  const SearchResult r = perfect_value(b);
  CHECK(r.value == Value::win);
  CHECK(r.nodes >= 1);
}

TEST_CASE("values are invariant under the board symmetries") {
  std::mt19937_64 rng(21);
  for (int it = 0; it < 60; it++) {
    const Board b = random_root(rng, 33);
    const GlobalSym d{uint8_t(rng() % 8)};
    CHECK(perfect_value(transform_board(GroupElem{{}, d}, b)).value == perfect_value(b).value);
  }
}

TEST_CASE("caching and pruning do not change values") {
  std::mt19937_64 rng(22);
  SearchOptions plain;
  plain.cache = false;
  plain.prune = false;
  SearchOptions cached_only = plain;
  cached_only.cache = true;
  for (int it = 0; it < 30; it++) {
    const Board b = random_root(rng, it % 2 ? 33 : 32);
    const Value v = perfect_value(b).value;
    CHECK(perfect_value(b, plain).value == v);
    CHECK(perfect_value(b, cached_only).value == v);
  }
}

TEST_CASE("the value is the best move value") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 40; it++) {
    const Board b = random_root(rng, 33);
    Value best = Value::loss;
    for (const Successor& s : moves(b)) {
      const Value v = s.move.rotation ? -perfect_value(s.board).value : Value::win;
      best = std::max(best, v);
    }
    CHECK(perfect_value(b).value == best);
  }
}

TEST_CASE("full boards are adjudicated statically") {
  std::mt19937_64 rng(24);
  for (int it = 0; it < 200; it++) {
    const Board b = oracle::random_board(rng, 36);
    const oracle::Grid g = oracle::decode(b.key());
    const bool bw = oracle::won(g, 1), ww = oracle::won(g, 2);
    const Value expect = bw == ww ? Value::tie : (bw ? Value::win : Value::loss);
    CHECK(perfect_value(b).value == expect);  // black to move at 36 stones
  }
}

TEST_CASE("boundaries and limits") {
  try {
    perfect_value(Board{});
    FAIL("expected TreeTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::tree_too_large);
    CHECK(std::string(e.what()).find("nodes") != std::string::npos);
  }
  SearchOptions o;
  o.boundary_slice = 2;
  o.boundary = [](Board b) { return b.quadrant(0) ? Value::win : Value::loss; };
  // the boundary favours black exactly when quadrant 0 is occupied, and a
  // stone never leaves its quadrant
  const Board one = place(Board{}, {0, 0}, Color::black);
  CHECK(perfect_value(one, o).value == Value::loss);
  const Board far = place(Board{}, {5, 5}, Color::black);
  CHECK(perfect_value(far, o).value == Value::win);
  const Board three = place(place(one, {1, 1}, Color::white), {2, 2}, Color::black);
  CHECK_THROWS_AS(perfect_value(three, o), Error);
}
