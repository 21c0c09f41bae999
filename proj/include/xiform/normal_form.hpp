#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "xiform/error.hpp"
#include "xiform/int_matrix.hpp"

namespace xiform {

struct HnfResult {
  IntMatrix h; // row Hermite normal form of the input
  IntMatrix u; // unimodular, u * m = h
};

struct SnfResult {
  IntMatrix d; // diagonal, d1 | d2 | ..., entries non-negative
  IntMatrix u; // unimodular, u * m * v = d
  IntMatrix v;
};

namespace detail {

// Replace rows (r, i) by a unimodular 2x2 combination that puts
// gcd(a(r,c), a(i,c)) at (r,c) and zero at (i,c). Mirrors the op on `track`.
inline void combine_rows(IntMatrix& a, IntMatrix& track, std::size_t r, std::size_t i,
                         std::size_t c) {
  Int g, s, t;
  xgcd(a(r, c), a(i, c), g, s, t);
  Int p = a(r, c) / g;
  Int q = a(i, c) / g;
  // det [[s, t], [-q, p]] = s*p + t*q = 1
  for (std::size_t j = 0; j < a.cols(); ++j) {
    Int x = a(r, j), y = a(i, j);
    a(r, j) = s * x + t * y;
    a(i, j) = p * y - q * x;
  }
  for (std::size_t j = 0; j < track.cols(); ++j) {
    Int x = track(r, j), y = track(i, j);
    track(r, j) = s * x + t * y;
    track(i, j) = p * y - q * x;
  }
}

inline void swap_rows(IntMatrix& a, std::size_t r, std::size_t i) {
  for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(i, j));
}

inline void negate_row(IntMatrix& a, std::size_t r) {
  for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) = -a(r, j);
}

} // namespace detail

/// Row-style Hermite normal form: u*m = h with |det u| = 1, pivots positive,
/// entries above each pivot reduced into [0, pivot).
inline HnfResult hermite_normal_form(const IntMatrix& m) {
  IntMatrix h = m;
  IntMatrix u = IntMatrix::identity(m.rows());
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
    std::size_t piv = r;
    while (piv < h.rows() && h(piv, c) == 0) ++piv;
    if (piv == h.rows()) continue;
    if (piv != r) {
      detail::swap_rows(h, r, piv);
      detail::swap_rows(u, r, piv);
    }
    for (std::size_t i = r + 1; i < h.rows(); ++i)
      if (h(i, c) != 0) detail::combine_rows(h, u, r, i, c);
    if (h(r, c) < 0) {
      detail::negate_row(h, r);
      detail::negate_row(u, r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      if (h(i, c) == 0) continue;
      Int f = floor_div(h(i, c), h(r, c));
      if (f == 0) continue;
      for (std::size_t j = 0; j < h.cols(); ++j) h(i, j) -= f * h(r, j);
      for (std::size_t j = 0; j < u.cols(); ++j) u(i, j) -= f * u(r, j);
    }
    ++r;
  }
  return {std::move(h), std::move(u)};
}

namespace detail {

/// Quotient with remainder of minimal absolute value (|r| <= |b|/2).
inline Int round_div(const Int& a, const Int& b) {
  Int q = a / b;
  Int r = a - q * b;
  Int babs = b < 0 ? Int(-b) : b;
  if (2 * (r < 0 ? Int(-r) : r) > babs) {
    if ((r < 0) == (b < 0))
      q += 1;
    else
      q -= 1;
  }
  return q;
}

} // namespace detail

/// Smith normal form: u*m*v = d, u and v unimodular, d diagonal with a
/// non-negative divisibility chain. Classical minimal-pivot algorithm with
/// remainder reduction: every round either cleans the pivot cross or creates
/// a strictly smaller nonzero entry, so each step terminates.
inline SnfResult smith_normal_form(const IntMatrix& m) {
  IntMatrix d = m;
  IntMatrix u = IntMatrix::identity(m.rows());
  IntMatrix v = IntMatrix::identity(m.cols());

  auto row_axpy = [&](std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < d.cols(); ++j) d(dst, j) -= q * d(src, j);
    for (std::size_t j = 0; j < u.cols(); ++j) u(dst, j) -= q * u(src, j);
  };
  auto col_axpy = [&](std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < d.rows(); ++i) d(i, dst) -= q * d(i, src);
    for (std::size_t i = 0; i < v.rows(); ++i) v(i, dst) -= q * v(i, src);
  };
  auto col_swap = [&](std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < d.rows(); ++i) std::swap(d(i, a), d(i, b));
    for (std::size_t i = 0; i < v.rows(); ++i) std::swap(v(i, a), v(i, b));
  };

  const std::size_t steps = std::min(d.rows(), d.cols());
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      // move the nonzero entry of minimal absolute value to (t,t)
      std::size_t pi = t, pj = t;
      bool found = false;
      Int best = 0;
      for (std::size_t i = t; i < d.rows(); ++i)
        for (std::size_t j = t; j < d.cols(); ++j) {
          if (d(i, j) == 0) continue;
          Int a = d(i, j) < 0 ? Int(-d(i, j)) : d(i, j);
          if (!found || a < best) {
            found = true;
            best = a;
            pi = i;
            pj = j;
          }
        }
      if (!found) {
        t = steps; // remaining block is zero
        break;
      }
      if (pi != t) {
        detail::swap_rows(d, t, pi);
        detail::swap_rows(u, t, pi);
      }
      if (pj != t) col_swap(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < d.rows(); ++i)
        if (d(i, t) != 0) {
          row_axpy(i, t, detail::round_div(d(i, t), d(t, t)));
          if (d(i, t) != 0) clean = false;
        }
      for (std::size_t j = t + 1; j < d.cols(); ++j)
        if (d(t, j) != 0) {
          col_axpy(j, t, detail::round_div(d(t, j), d(t, t)));
          if (d(t, j) != 0) clean = false;
        }
      if (!clean) continue; // a remainder smaller than the pivot survives

      // pivot divides its cross; enforce divisibility over the block
      bool fixed = false;
      for (std::size_t i = t + 1; i < d.rows() && !fixed; ++i)
        for (std::size_t j = t + 1; j < d.cols() && !fixed; ++j)
          if (d(i, j) % d(t, t) != 0) {
            for (std::size_t c = 0; c < d.cols(); ++c) d(t, c) += d(i, c);
            for (std::size_t c = 0; c < u.cols(); ++c) u(t, c) += u(i, c);
            fixed = true;
          }
      if (fixed) continue;
      if (d(t, t) < 0) {
        detail::negate_row(d, t);
        detail::negate_row(u, t);
      }
      break;
    }
    if (t == steps) break;
  }
  return {std::move(d), std::move(u), std::move(v)};
}

/// Fraction-free determinant (Bareiss).
inline Int determinant(const IntMatrix& m) {
  if (!m.is_square()) throw Error(errc::dimension_mismatch, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && a(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      detail::swap_rows(a, k, piv);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int num = a(k, k) * a(i, j) - a(i, k) * a(k, j);
        a(i, j) = num / prev;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign > 0 ? a(n - 1, n - 1) : Int(-a(n - 1, n - 1));
}

/// Solve a*x = b over the integers for any shapes (a: m x n, b: m x k).
/// Returns one solution when the system is solvable, absent otherwise. When
/// |det a| = 1 the solution is unique. Free coordinates are set to zero.
inline std::optional<IntMatrix> solve_integral(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows())
    throw Error(errc::dimension_mismatch, "solve_integral shape mismatch");
  SnfResult snf = smith_normal_form(a);
  IntMatrix c = snf.u * b;
  IntMatrix y(a.cols(), b.cols());
  const std::size_t r = std::min(a.rows(), a.cols());
  for (std::size_t col = 0; col < b.cols(); ++col) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      Int di = i < r ? snf.d(i, i) : Int(0);
      if (di != 0) {
        if (c(i, col) % di != 0) return std::nullopt;
        y(i, col) = c(i, col) / di;
      } else if (c(i, col) != 0) {
        return std::nullopt;
      }
    }
  }
  return snf.v * y;
}

inline std::optional<IntVec> solve_integral(const IntMatrix& a, const IntVec& b) {
  IntMatrix bm(b.size(), 1);
  for (std::size_t i = 0; i < b.size(); ++i) bm(i, 0) = b[i];
  auto x = solve_integral(a, bm);
  if (!x) return std::nullopt;
  return x->col(0);
}

/// Saturated basis of the right kernel {x : a*x = 0}. The columns extend to a
/// basis of the ambient lattice, so the kernel is returned as a direct summand.
inline IntMatrix kernel_basis(const IntMatrix& a) {
  HnfResult hnf = hermite_normal_form(a.transpose());
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < hnf.h.rows(); ++i) {
    bool z = true;
    for (std::size_t j = 0; j < hnf.h.cols(); ++j)
      if (hnf.h(i, j) != 0) { z = false; break; }
    if (!z) nonzero = i + 1;
  }
  std::vector<IntVec> cols;
  for (std::size_t idx = nonzero; idx < hnf.u.rows(); ++idx) {
    IntVec v = hnf.u.row(idx);
    // canonical sign: leading nonzero entry positive
    for (const Int& x : v) {
      if (x == 0) continue;
      if (x < 0)
        for (Int& y : v) y = -y;
      break;
    }
    cols.push_back(std::move(v));
  }
  auto leading = [](const IntVec& v) {
    std::size_t i = 0;
    while (i < v.size() && v[i] == 0) ++i;
    return i;
  };
  std::stable_sort(cols.begin(), cols.end(),
                   [&](const IntVec& a2, const IntVec& b2) { return leading(a2) < leading(b2); });
  IntMatrix k(a.cols(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols[j].size(); ++i) k(i, j) = cols[j][i];
  return k;
}

/// Decomposition data for a full-column-rank sublattice span S (m x k):
/// elementary divisors plus a unimodular basis of the ambient lattice whose
/// first k columns span the saturation of S and whose remaining columns
/// complement it.
struct SaturationData {
  IntVec divisors;      // elementary divisors of S (length k)
  IntMatrix saturation; // m x k
  IntMatrix complement; // m x (m-k)
};

inline SaturationData saturate(const IntMatrix& s) {
  SnfResult snf = smith_normal_form(s);
  auto uinv = solve_integral(snf.u, IntMatrix::identity(snf.u.rows()));
  if (!uinv) throw Error(errc::internal, "failed to invert unimodular factor");
  const std::size_t k = s.cols();
  SaturationData out;
  out.divisors.resize(k);
  const std::size_t r = std::min(s.rows(), s.cols());
  for (std::size_t i = 0; i < k; ++i) out.divisors[i] = i < r ? snf.d(i, i) : Int(0);
  out.saturation = uinv->columns(0, k);
  out.complement = uinv->columns(k, s.rows() - k);
  return out;
}

/// A sublattice span is saturated (a direct summand) iff it has full column
/// rank and all elementary divisors equal to one.
inline bool is_saturated(const IntMatrix& s) {
  if (s.cols() == 0) return true;
  SnfResult snf = smith_normal_form(s);
  const std::size_t r = std::min(s.rows(), s.cols());
  if (s.cols() > r) return false;
  for (std::size_t i = 0; i < s.cols(); ++i)
    if (snf.d(i, i) != 1) return false;
  return true;
}

inline bool is_unimodular_matrix(const IntMatrix& m) {
  if (!m.is_square()) return false;
  Int d = determinant(m);
  return d == 1 || d == -1;
}

inline IntMatrix inverse_unimodular(const IntMatrix& m) {
  auto inv = solve_integral(m, IntMatrix::identity(m.rows()));
  if (!inv) throw Error(errc::not_unimodular, "matrix has no integral inverse");
  return *inv;
}

} // namespace xiform
