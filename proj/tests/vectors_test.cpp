#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "oracles.h"

using namespace pentago;

// Rows y=5..0 top to bottom, columns x=0..5.
oracle::Grid grid_of(const std::string& s) {
  oracle::Grid g{};
  for (int i = 0; i < 36; i++) g[i % 6][5 - i / 6] = s[i] - '0';
  return g;
}

TEST_CASE("shared board key vectors") {
  std::ifstream file(PENTAGO_SOURCE_DIR "/data/board_keys.txt");
  REQUIRE(file);
  std::string line;
  std::set<int> stones;
  size_t lines = 0;
  while (std::getline(file, line)) {
    std::istringstream in(line);
    std::string board;
    uint64_t key = 0;
    in >> board >> key;
    REQUIRE(bool(in));
    REQUIRE(board.size() == 36);
    CHECK(oracle::encode(grid_of(board)) == key);
    const Board b = parse_board(board);
    CHECK(b.key() == key);
    CHECK(parse_board(std::to_string(key)) == b);
    CHECK(to_string(b) == board);
    CHECK(b.valid_position());
    stones.insert(b.stones());
    lines++;
  }
  CHECK(lines >= 1000);
  CHECK(stones.size() == 37);
}
