#pragma once

// Exact position counts per slice and the derived layout ratios.

#include <boost/multiprecision/cpp_int.hpp>

namespace pentago {

using BigInt = boost::multiprecision::cpp_int;

// Arrangements with ceil(n/2) black and floor(n/2) white stones.
BigInt raw_count(int n);
// Burnside numerator: sum over the 8 board symmetries of fixed arrangements.
BigInt burnside_sum(int n);
// Arrangements up to the 8 board symmetries.
BigInt sym_count(int n);

BigInt total_raw();
BigInt total_sym();

struct Overcount {
  double rotation = 0;  // 256 * supers over all sections / raw arrangements
  double section = 0;   // combined / rotation
  double combined = 0;  // 256 * supers over kept sections / symmetry-reduced positions
};

Overcount overcount_ratio();

enum class BranchingMode { raw, rotation_abstracted };

// Sum_n N(n) (36-n) k / Sum_n N(n) with N = sym_count over the given slices.
double branching_average(BranchingMode mode, int first_slice = 0, int last_slice = 36);

}  // namespace pentago
