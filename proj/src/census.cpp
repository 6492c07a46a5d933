#include "pentago/census.h"

#include <array>
#include <vector>

#include "pentago/layout.h"
#include "pentago/rules.h"

namespace pentago {
namespace {

using Poly = std::array<std::array<BigInt, 37>, 37>;  // [black][white]

// Generating polynomial of arrangements fixed by one board symmetry: every
// cycle of its cell permutation is uniformly empty, black or white.
std::array<Poly, 8> build_fixed() {
  std::array<Poly, 8> out;
  for (int di = 0; di < 8; di++) {
    const GroupElem g{LocalRot{}, GlobalSym{uint8_t(di)}};
    std::array<bool, 36> seen{};
    Poly p{};
    p[0][0] = 1;
    for (int start = 0; start < 36; start++) {
      if (seen[start]) continue;
      int len = 0;
      for (int c = start; !seen[c]; c = transform_cell(g, Cell::from_bit(c)).bit()) {
        seen[c] = true;
        len++;
      }
      Poly next{};
      for (int b = 0; b <= 36; b++)
        for (int w = 0; b + w <= 36; w++) {
          if (p[b][w] == 0) continue;
          next[b][w] += p[b][w];
          if (b + len <= 36) next[b + len][w] += p[b][w];
          if (w + len <= 36) next[b][w + len] += p[b][w];
        }
      p = next;
    }
    out[di] = p;
  }
  return out;
}

const std::array<Poly, 8>& fixed_polys() {
  static const auto polys = build_fixed();
  return polys;
}

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 1; i <= k; i++) r = r * (n - k + i) / i;
  return r;
}

void check_slice(int n) {
  if (n < 0 || n > 36) throw Error(Errc::invalid_argument, "slice " + std::to_string(n) + " out of range");
}

}  // namespace

BigInt raw_count(int n) {
  check_slice(n);
  const int b = (n + 1) / 2, w = n / 2;
  return binomial(36, b) * binomial(36 - b, w);
}

BigInt burnside_sum(int n) {
  check_slice(n);
  BigInt s = 0;
  for (const Poly& p : fixed_polys()) s += p[(n + 1) / 2][n / 2];
  return s;
}

BigInt sym_count(int n) {
  const BigInt s = burnside_sum(n);
  if (s % 8 != 0) throw Error(Errc::invalid_argument, "Burnside sum not divisible by 8 at slice " + std::to_string(n));
  return s / 8;
}

BigInt total_raw() {
  BigInt t = 0;
  for (int n = 0; n <= 36; n++) t += raw_count(n);
  return t;
}

BigInt total_sym() {
  BigInt t = 0;
  for (int n = 0; n <= 36; n++) t += sym_count(n);
  return t;
}

Overcount overcount_ratio() {
  // supers over every valid count tuple, by convolution of dictionary sizes
  std::vector<std::vector<BigInt>> f(37, std::vector<BigInt>(37));
  f[0][0] = 1;
  for (int q = 0; q < 4; q++) {
    std::vector<std::vector<BigInt>> g(37, std::vector<BigInt>(37));
    for (int B = 0; B <= 36; B++)
      for (int W = 0; B + W <= 36; W++) {
        if (f[B][W] == 0) continue;
        for (int b = 0; b <= 9; b++)
          for (int w = 0; b + w <= 9; w++) g[B + b][W + w] += f[B][W] * quad_states(b, w).size();
      }
    f = g;
  }
  BigInt all = 0, kept = 0;
  for (int B = 0; B <= 36; B++)
    for (int W = B - 1; W <= B; W++)
      if (W >= 0 && B + W <= 36) all += f[B][W];
  for (int n = 0; n <= 36; n++) kept += SliceLayout(n).supers();
  const double raw = total_raw().convert_to<double>(), sym = total_sym().convert_to<double>();
  Overcount o;
  o.rotation = 256.0 * all.convert_to<double>() / raw;
  o.combined = 256.0 * kept.convert_to<double>() / sym;
  o.section = o.combined / o.rotation;
  return o;
}

double branching_average(BranchingMode mode, int first_slice, int last_slice) {
  const int k = mode == BranchingMode::raw ? 8 : 1;
  BigInt num = 0, den = 0;
  for (int n = first_slice; n <= last_slice; n++) {
    const BigInt c = sym_count(n);
    num += c * (36 - n) * k;
    den += c;
  }
  return num.convert_to<double>() / den.convert_to<double>();
}

}  // namespace pentago
