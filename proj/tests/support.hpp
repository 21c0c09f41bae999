#pragma once

// Shared helpers for the test suites: seeded random unimodular matrices with
// clamped entries, random functionals, and small brute-force oracles kept
// independent of the library code they check.

#include <cstdint>
#include <random>
#include <vector>

#include "xiform/forms.hpp"
#include "xiform/int_matrix.hpp"

namespace testsupport {

using xiform::GramForm;
using xiform::Int;
using xiform::IntMatrix;
using xiform::IntVec;
using xiform::ModTwoFunctional;

/// Random unimodular matrix with every entry in [-entry_bound, entry_bound],
/// built from random unit shears; a shear is skipped when it would push an
/// entry out of range, so the bound holds exactly.
inline IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, long long entry_bound,
                                   int shear_rounds = 40) {
  IntMatrix u = IntMatrix::identity(n);
  if (n < 2) return u;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int round = 0; round < shear_rounds; ++round) {
    std::size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    int sign = coin(rng) ? 1 : -1;
    bool row_op = coin(rng);
    IntMatrix candidate = u;
    if (row_op) {
      for (std::size_t c = 0; c < n; ++c) candidate(i, c) += sign * candidate(j, c);
    } else {
      for (std::size_t r = 0; r < n; ++r) candidate(r, i) += sign * candidate(r, j);
    }
    bool in_range = true;
    for (std::size_t r = 0; r < n && in_range; ++r)
      for (std::size_t c = 0; c < n && in_range; ++c)
        if (candidate(r, c) > entry_bound || candidate(r, c) < -entry_bound) in_range = false;
    if (in_range) u = candidate;
  }
  return u;
}

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                               long long bound) {
  std::uniform_int_distribution<long long> entry(-bound, bound);
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = entry(rng);
  return m;
}

inline ModTwoFunctional random_functional(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> bit(0, 1);
  ModTwoFunctional g;
  g.bits.resize(n);
  for (auto& b : g.bits) b = static_cast<std::uint8_t>(bit(rng));
  return g;
}

inline ModTwoFunctional bits_from_mask(std::uint32_t mask, std::size_t n) {
  ModTwoFunctional g;
  g.bits.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.bits[i] = (mask >> i) & 1u;
  return g;
}

} // namespace testsupport
