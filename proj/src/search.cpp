#include "pentago/search.h"

#include <cmath>
#include <unordered_map>

#include "pentago/super.h"

namespace pentago {
namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  double r = 1;
  for (int i = 1; i <= k; i++) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double search_estimate(Board b, const SearchOptions& o) {
  const int n = b.stones();
  const int last = std::min(36, o.boundary ? o.boundary_slice : 36);
  double total = 0;
  if (o.cache) {
    // boards of each later slice: choose the filled cells anywhere, then the colors
    for (int k = n; k <= last; k++) {
      const int black = (k + 1) / 2;
      total += std::min(binomial(36 - n, k - n) * binomial(k - n, black - b.count(Color::black)) * 256,
                        binomial(36, k) * binomial(k, black));
    }
  } else {
    double level = 1;
    for (int k = n; k < last; k++) {
      level *= (36 - k) * 8;
      total += level;
    }
  }
  return total;
}

struct Searcher::Impl {
  SearchOptions options;
  std::unordered_map<uint64_t, int8_t> cache;
  uint64_t nodes = 0;

  Value solve(Board b) {
    nodes++;
    if (options.boundary && b.stones() == options.boundary_slice) return options.boundary(b);
    if (auto t = terminal_value(b)) return *t;
    uint64_t key = 0;
    if (options.cache) {
      key = canonicalize_global(b).board.key();
      auto it = cache.find(key);
      if (it != cache.end()) return Value(it->second);
    }
    Value best = Value::loss;
    for (const Successor& s : moves(b)) {
      const Value v = s.move.rotation ? -solve(s.board) : Value::win;
      if (v > best) best = v;
      if (best == Value::win && options.prune) break;
    }
    if (options.cache) cache.emplace(key, int8_t(best));
    return best;
  }
};

Searcher::Searcher(SearchOptions options) : impl_(new Impl{std::move(options), {}, 0}) {}
Searcher::~Searcher() { delete impl_; }
size_t Searcher::cached() const { return impl_->cache.size(); }

SearchResult Searcher::value(Board b) {
  if (!b.valid_position()) throw Error(Errc::invalid_argument, "not a legal position");
  if (impl_->options.boundary && b.stones() > impl_->options.boundary_slice)
    throw Error(Errc::invalid_argument, "board lies beyond the boundary slice");
  // settled at the root without any tree
  if (!terminal_value(b) && !(impl_->options.boundary && b.stones() == impl_->options.boundary_slice) &&
      placement_wins(b, b.to_move()).test(0)) {
    impl_->nodes++;
    return {Value::win, 1};
  }
  const double estimate = search_estimate(b, impl_->options);
  if (estimate > double(impl_->options.node_limit))
    throw Error(Errc::tree_too_large, "about " + std::to_string(uint64_t(std::min(estimate, 1e19))) + " nodes below a " +
                                          std::to_string(b.stones()) + "-stone board (limit " +
                                          std::to_string(impl_->options.node_limit) + ")");
  const uint64_t before = impl_->nodes;
  const Value v = impl_->solve(b);
  return {v, impl_->nodes - before};
}

SearchResult perfect_value(Board b, const SearchOptions& options) { return Searcher(options).value(b); }

}  // namespace pentago
