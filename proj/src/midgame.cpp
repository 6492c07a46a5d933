#include "pentago/midgame.h"

#include <bit>
#include <chrono>
#include <cstring>
#include <memory>

#ifdef __BMI2__
#include <immintrin.h>
#endif

namespace pentago {
namespace {

uint64_t pext(uint64_t x, uint64_t mask) {
#ifdef __BMI2__
  return _pext_u64(x, mask);
#else
  uint64_t out = 0;
  for (uint64_t bit = 1; mask; bit <<= 1, mask &= mask - 1)
    if (x & mask & -mask) out |= bit;
  return out;
#endif
}

uint64_t pdep(uint64_t x, uint64_t mask) {
#ifdef __BMI2__
  return _pdep_u64(x, mask);
#else
  uint64_t out = 0;
  for (uint64_t bit = 1; mask; bit <<= 1, mask &= mask - 1)
    if (x & bit) out |= mask & -mask;
  return out;
#endif
}

// bits of a word whose in-word index has even r0 + r1 + r2
constexpr uint64_t even_in_word() {
  uint64_t m = 0;
  for (int i = 0; i < 64; i++)
    if (std::popcount(unsigned(i & 0x15)) % 2 == 0) m |= uint64_t(1) << i;
  return m;
}
constexpr uint64_t kEven = even_in_word();

uint64_t word_mask(int k, int parity) { return ((k & 1) ^ parity) ? ~kEven : kEven; }

uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  uint64_t r = 1;
  for (int i = 1; i <= k; i++) r = r * uint64_t(n - k + i) / uint64_t(i);
  return r;
}

struct Half {
  HalfRotSet win, notloss;
};

uint64_t next_combination(uint64_t v) {
  const uint64_t t = v | (v - 1);
  return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
}

}  // namespace

HalfRotSet halve(const RotSet& s, int parity) {
  HalfRotSet h;
  for (int k = 0; k < 4; k++) h.w[k >> 1] |= pext(s.w[k], word_mask(k, parity)) << (32 * (k & 1));
  return h;
}

RotSet expand(const HalfRotSet& h, int parity) {
  RotSet s;
  for (int k = 0; k < 4; k++) s.w[k] = pdep(h.w[k >> 1] >> (32 * (k & 1)), word_mask(k, parity));
  return s;
}

uint64_t supported_count(Board root, int k) {
  const int n = root.stones();
  if (k < n || k > 36) throw Error(Errc::invalid_argument, "slice " + std::to_string(k) + " outside " + std::to_string(n) + "..36");
  const int j = k - n;
  return binomial(36 - n, j) * binomial(j, (k + 1) / 2 - root.count(Color::black));
}

uint64_t midgame_memory_estimate(Board root) {
  const int n = root.stones();
  uint64_t peak = 0;
  for (int k = n + 1; k < 36; k++) peak = std::max(peak, supported_count(root, k) + supported_count(root, k + 1));
  return peak * sizeof(Half) + (uint64_t(1) << (36 - n)) * sizeof(uint32_t);
}

struct MidgameSolver::Impl {
  Board root;
  MidgameOptions options;
  int n = 0;
  int e = 0;
  uint64_t empty_cells = 0;
  std::vector<uint32_t> rank;  // colex rank of a mask among masks with its popcount
  std::vector<std::vector<Half>> slices;  // indexed by k

  int parity(int k) const { return (k - n) & 1; }
  int added_black(int k) const { return (k + 1) / 2 - root.count(Color::black); }

  uint64_t index(int k, uint64_t filled, uint64_t black) const {
    return uint64_t(rank[filled]) * binomial(k - n, added_black(k)) + rank[black];
  }

  // Filled positions (bits over the root's empty list) and black pattern among them.
  std::pair<uint64_t, uint64_t> coordinates(Board b) const {
    const uint64_t occupied = ~b.empty() & kFullMask;
    const uint64_t root_occupied = ~root.empty() & kFullMask;
    if ((occupied & root_occupied) != root_occupied || b.side(Color::black) & root.side(Color::white) ||
        b.side(Color::white) & root.side(Color::black))
      throw Error(Errc::invalid_argument, "board is not below the root");
    const uint64_t added = occupied & empty_cells;
    const uint64_t filled = pext(added, empty_cells);
    const uint64_t black = pext(pext(b.side(Color::black) & empty_cells, empty_cells), filled);
    return {filled, black};
  }

  void compute_full(std::vector<Half>& out) {
    const int k = 36, j = 36 - n, jb = added_black(36);
    out.resize(size_t(supported_count(root, 36)));
    const uint64_t filled = (uint64_t(1) << j) - 1;
    const uint64_t cells = pdep(filled, empty_cells);
    const uint64_t root_black = root.side(Color::black), root_white = root.side(Color::white);
    uint64_t t = (uint64_t(1) << jb) - 1;
    for (uint64_t i = 0; i < out.size(); i++, t = jb ? next_combination(t) : 0) {
      const uint64_t black = pdep(t, cells);
      const Board b = Board::from_sides(root_black | black, root_white | (cells & ~black));
      const SuperValue v = full_board_value(b);
      out[i] = {halve(v.win, parity(k)), halve(v.notloss, parity(k))};
    }
  }

  void compute(int k, const std::vector<Half>& child, std::vector<Half>& out) {
    const int j = k - n, jb = added_black(k);
    const int p = parity(k), cp = parity(k + 1);
    const Color c = (k & 1) ? Color::white : Color::black;
    const uint64_t cstride = binomial(j + 1, added_black(k + 1));
    const uint64_t patterns = binomial(j, jb);
    const uint64_t all = (uint64_t(1) << e) - 1;
    const uint64_t root_black = root.side(Color::black), root_white = root.side(Color::white);
    out.resize(size_t(supported_count(root, k)));
    uint64_t filled = (uint64_t(1) << j) - 1;
    uint64_t pos = 0;
    for (uint64_t si = 0, subsets = binomial(e, j); si < subsets; si++, filled = j ? next_combination(filled) : 0) {
      const uint64_t cells = pdep(filled, empty_cells);
      const uint64_t open = all & ~filled;
      uint64_t t = (uint64_t(1) << jb) - 1;
      for (uint64_t ti = 0; ti < patterns; ti++, pos++, t = jb ? next_combination(t) : 0) {
        const uint64_t black = pdep(t, cells);
        const Board b = Board::from_sides(root_black | black, root_white | (cells & ~black));
        HalfRotSet acc_win, acc_nl;
        for (uint64_t rest = open; rest; rest &= rest - 1) {
          const int q = std::countr_zero(rest);
          const uint64_t cf = filled | uint64_t(1) << q;
          const int at = std::popcount(filled & ((uint64_t(1) << q) - 1));
          const uint64_t low = t & ((uint64_t(1) << at) - 1);
          const uint64_t ct = low | (uint64_t(c == Color::black) << at) | ((t >> at) << (at + 1));
          const Half& h = child[uint64_t(rank[cf]) * cstride + rank[ct]];
          // negation: win <- not notloss, notloss <- not win
          acc_win.w[0] |= ~h.notloss.w[0];
          acc_win.w[1] |= ~h.notloss.w[1];
          acc_nl.w[0] |= ~h.win.w[0];
          acc_nl.w[1] |= ~h.win.w[1];
        }
        SuperValue v{rmax(expand(acc_win, cp)), rmax(expand(acc_nl, cp))};
        const MoverWins mw = mover_wins(b, c);
        v.win |= mw.placements;
        v.notloss |= v.win;
        v = adjudicate_terminals(v, mw.wins, super_wins(b, other(c)));
        out[pos] = {halve(v.win, p), halve(v.notloss, p)};
      }
    }
  }
};

MidgameSolver::MidgameSolver(Board root, MidgameOptions options) : impl_(new Impl) {
  if (!root.valid_position()) throw Error(Errc::invalid_argument, "root is not a legal position");
  if (terminal_value(root)) throw Error(Errc::terminal_root, "the game is already over at the root");
  const uint64_t need = midgame_memory_estimate(root);
  if (root.stones() < options.threshold || need > options.memory_budget)
    throw Error(Errc::too_few_stones, "root has " + std::to_string(root.stones()) + " stones (threshold " +
                                          std::to_string(options.threshold) + "); solving needs about " +
                                          std::to_string(need >> 20) + " MiB (budget " +
                                          std::to_string(options.memory_budget >> 20) + " MiB)");
  Impl& m = *impl_;
  m.root = root;
  m.options = options;
  m.n = root.stones();
  m.e = 36 - m.n;
  m.empty_cells = root.empty();
  m.rank.assign(size_t(1) << m.e, 0);
  for (uint64_t mask = 1; mask < m.rank.size(); mask++) {
    uint64_t r = 0;
    int i = 0;
    for (uint64_t rest = mask; rest; rest &= rest - 1) r += binomial(std::countr_zero(rest), ++i);
    m.rank[mask] = uint32_t(r);
  }
  m.slices.resize(37);
}

MidgameSolver::~MidgameSolver() { delete impl_; }

int MidgameSolver::parity(int k) const { return impl_->parity(k); }

MidgameResult MidgameSolver::solve() {
  const auto start = std::chrono::steady_clock::now();
  Impl& m = *impl_;
  MidgameResult r;
  r.root = m.root;
  m.compute_full(m.slices[36]);
  r.boards += m.slices[36].size();
  for (int k = 35; k > m.n; k--) {
    m.compute(k, m.slices[k + 1], m.slices[k]);
    r.boards += m.slices[k].size();
    if (!m.options.keep_slices) std::vector<Half>().swap(m.slices[k + 1]);
  }
  const Color c = m.root.to_move();
  const int k = m.n + 1;
  for (const Successor& s : moves(m.root)) {
    MoveValue mv{s.move, s.board, Value::win};
    if (s.move.rotation) {
      const Board c0 = place(m.root, s.move.cell, c);
      const auto [filled, black] = m.coordinates(c0);
      const Half& h = m.slices[k][m.index(k, filled, black)];
      const SuperValue v{expand(h.win, m.parity(k)), expand(h.notloss, m.parity(k))};
      const Rotation rot = *s.move.rotation;
      mv.value = -v.at(LocalRot::single(rot.quadrant, rot.direction > 0 ? 1 : 3).index);
    }
    r.value = std::max(r.value, mv.value);
    r.moves.push_back(mv);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

SuperValue MidgameSolver::stored(Board b) const {
  const Impl& m = *impl_;
  const int k = b.stones();
  if (k <= m.n || k > 36 || m.slices[k].empty()) throw Error(Errc::block_not_found, "slice " + std::to_string(k) + " is not held");
  const auto [filled, black] = m.coordinates(b);
  const Half& h = m.slices[k][m.index(k, filled, black)];
  return {expand(h.win, m.parity(k)), expand(h.notloss, m.parity(k))};
}

MidgameResult solve_midgame(Board root, const MidgameOptions& options) { return MidgameSolver(root, options).solve(); }

}  // namespace pentago
