#pragma once

#include <cstddef>
#include <vector>

#include "xiform/error.hpp"
#include "xiform/int_matrix.hpp"

namespace xiform {

struct InertiaCounts {
  std::size_t n_plus = 0;
  std::size_t n_minus = 0;
  std::size_t n_zero = 0;

  long long signature() const {
    return static_cast<long long>(n_plus) - static_cast<long long>(n_minus);
  }
  friend bool operator==(const InertiaCounts&, const InertiaCounts&) = default;
};

/// Inertia counts of a symmetric integer matrix by exact rational congruence
/// diagonalization. When a diagonal pivot is missing, a row+column addition
/// creates one (the off-diagonal entry is doubled onto the diagonal), which
/// keeps everything a congruence.
inline InertiaCounts signature_of_symmetric(const IntMatrix& m) {
  if (!m.is_symmetric()) throw Error(errc::not_symmetric, "matrix is not symmetric");
  const std::size_t n = m.rows();
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rat(m(i, j));

  InertiaCounts out;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_j = n, mix_j = n;
      for (std::size_t j = k + 1; j < n && swap_j == n; ++j)
        if (a[j][j] != 0) swap_j = j;
      for (std::size_t j = k + 1; j < n && mix_j == n; ++j)
        if (a[k][j] != 0) mix_j = j;
      if (swap_j != n) {
        for (std::size_t t = 0; t < n; ++t) std::swap(a[k][t], a[swap_j][t]);
        for (std::size_t t = 0; t < n; ++t) std::swap(a[t][k], a[t][swap_j]);
      } else if (mix_j != n) {
        for (std::size_t t = 0; t < n; ++t) a[k][t] += a[mix_j][t];
        for (std::size_t t = 0; t < n; ++t) a[t][k] += a[t][mix_j];
      } else {
        ++out.n_zero;
        continue;
      }
    }
    const Rat pivot = a[k][k];
    if (pivot > 0) ++out.n_plus; else ++out.n_minus;
    std::vector<Rat> factors(n);
    for (std::size_t i = k + 1; i < n; ++i) factors[i] = a[i][k] / pivot;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (factors[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) a[i][j] -= factors[i] * a[k][j];
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (factors[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) a[j][i] -= factors[i] * a[j][k];
    }
  }
  if (out.n_plus + out.n_minus + out.n_zero != n)
    throw Error(errc::internal, "inertia counts do not sum to the rank");
  return out;
}

} // namespace xiform
