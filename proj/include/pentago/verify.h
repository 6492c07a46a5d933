#pragma once

// Backward/forward equivalence: solve down from an injected slice and compare
// every position below it with forward search reading the same boundary.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pentago/engine.h"

namespace pentago {

// Every position with n stones reachable by play (black moves first).
std::vector<Board> positions_with(int n);

struct EquivalenceReport {
  int slice = 0;
  uint64_t seed = 0;
  uint64_t checked = 0;
  uint64_t mismatches = 0;
  std::vector<std::string> examples;  // first few mismatches
  double solve_seconds = 0;
  double check_seconds = 0;
  bool ok() const { return checked > 0 && mismatches == 0; }
};

// Positions with up to slice - 1 stones are compared; progress, when set, is
// called once per compared stone count.
EquivalenceReport check_equivalence(int slice, uint64_t seed, EngineConfig config,
                                    const std::function<void(int, uint64_t)>& progress = nullptr);

}  // namespace pentago
