#include "pentago/verify.h"

#include <algorithm>
#include <bit>
#include <chrono>

#include "pentago/search.h"

namespace pentago {

std::vector<Board> positions_with(int n) {
  std::vector<Board> layer{Board{}};
  for (int k = 0; k < n; k++) {
    std::vector<Board> next;
    for (Board b : layer)
      for (uint64_t e = b.empty(); e; e &= e - 1) next.push_back(place(b, Cell::from_bit(std::countr_zero(e)), b.to_move()));
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    layer = std::move(next);
  }
  return layer;
}

EquivalenceReport check_equivalence(int slice, uint64_t seed, EngineConfig config,
                                    const std::function<void(int, uint64_t)>& progress) {
  using Clock = std::chrono::steady_clock;
  if (slice < 1 || slice > 6) throw Error(Errc::invalid_argument, "equivalence runs from slices 1..6");
  EquivalenceReport r;
  r.slice = slice;
  r.seed = seed;
  config.keep_slices = true;
  const auto t0 = Clock::now();
  const SolveResult result = solve(slice, 0, BoundarySpec::random(seed), config);
  const auto t1 = Clock::now();
  r.solve_seconds = std::chrono::duration<double>(t1 - t0).count();

  SearchOptions options;
  options.boundary_slice = slice;
  options.boundary = [seed](Board b) { return injected_value(seed, b); };
  Searcher search(options);
  for (int n = 0; n < slice; n++) {
    const SolvedSlice solved(n, result.slices.at(n));
    uint64_t count = 0;
    for (Board b : positions_with(n)) {
      const Value backward = solved.value(b), forward = search.value(b).value;
      count++;
      if (backward != forward) {
        r.mismatches++;
        if (r.examples.size() < 5)
          r.examples.push_back(to_string(b) + ": engine " + value_name(backward) + ", search " + value_name(forward));
      }
    }
    r.checked += count;
    if (progress) progress(n, count);
  }
  r.check_seconds = std::chrono::duration<double>(Clock::now() - t1).count();
  return r;
}

}  // namespace pentago
