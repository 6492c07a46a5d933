#pragma once

// Forward negamax: exact values by depth-first tree search.  The reference the
// retrograde paths are checked against.

#include <cstdint>
#include <functional>

#include "pentago/rules.h"

namespace pentago {

struct SearchOptions {
  // When set, boards with boundary_slice stones take their value from boundary.
  int boundary_slice = 37;
  std::function<Value(Board)> boundary;
  bool cache = true;      // memoize on the board-symmetry representative
  bool prune = true;      // stop at the first winning move
  uint64_t node_limit = uint64_t(1) << 27;
};

struct SearchResult {
  Value value = Value::tie;
  uint64_t nodes = 0;
};

// Rough count of distinct positions below b (with caching) or of tree nodes
// (without).
double search_estimate(Board b, const SearchOptions& options);

// Throws TreeTooLarge when the estimate exceeds node_limit.
SearchResult perfect_value(Board b, const SearchOptions& options = {});

// Searches with one cache shared across calls.
class Searcher {
 public:
  explicit Searcher(SearchOptions options = {});
  ~Searcher();
  SearchResult value(Board b);
  size_t cached() const;

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace pentago
