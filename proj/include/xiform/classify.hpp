#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "xiform/error.hpp"
#include "xiform/forms.hpp"
#include "xiform/int_matrix.hpp"
#include "xiform/normal_form.hpp"

namespace xiform {

enum class TransformRole { full_basis, sublattice_span };

/// Either a unimodular base change (full_basis) or a full-column-rank span of
/// a sublattice, columns in the coordinates of the ambient form.
struct BasisTransform {
  IntMatrix matrix;
  TransformRole role = TransformRole::full_basis;
};

inline constexpr int kDefaultSearchCap = 32;

namespace detail {

/// Enumerates the box [-bound, bound]^rank. Coordinate 0 varies fastest and
/// each coordinate runs through 0, 1, -1, 2, -2, ... so that small vectors
/// come first. The visitor returns true to stop.
inline void enumerate_box(std::size_t rank, int bound,
                          const std::function<bool(const std::vector<long long>&)>& visit) {
  if (rank == 0) return;
  const int per = 2 * bound + 1;
  std::vector<int> digit(rank, 0);
  std::vector<long long> x(rank, 0);
  auto value_of = [](int d) -> long long {
    long long mag = (d + 1) / 2;
    return (d % 2 == 1) ? mag : -mag;
  };
  for (;;) {
    if (visit(x)) return;
    std::size_t i = 0;
    while (i < rank) {
      if (++digit[i] < per) {
        x[i] = value_of(digit[i]);
        break;
      }
      digit[i] = 0;
      x[i] = 0;
      ++i;
    }
    if (i == rank) return;
  }
}

inline bool gram_fits_int64(const IntMatrix& g, std::vector<long long>& flat) {
  flat.assign(g.rows() * g.cols(), 0);
  // guard so that x^T G x stays inside int64 for |x_i| <= 64:
  // |x^T G x| <= n^2 * 64^2 * max|G|
  const Int n = g.rows() == 0 ? Int(1) : Int(g.rows());
  const Int limit = Int(std::numeric_limits<long long>::max()) / (n * n * 64 * 64);
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      Int a = g(i, j);
      if (a > limit || a < -limit) return false;
      flat[i * g.cols() + j] = static_cast<long long>(a);
    }
  return true;
}

inline long long norm_int64(const std::vector<long long>& gram, std::size_t n,
                            const std::vector<long long>& x) {
  long long s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    long long row = 0;
    for (std::size_t j = 0; j < n; ++j) row += gram[i * n + j] * x[j];
    s += x[i] * row;
  }
  return s;
}

inline bool primitive_int64(const std::vector<long long>& x) {
  long long g = 0;
  for (long long v : x) {
    long long a = v < 0 ? -v : v;
    while (a != 0) {
      long long t = g % a;
      g = a;
      a = t;
    }
  }
  return g == 1;
}

inline IntVec to_intvec(const std::vector<long long>& x) {
  IntVec v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = x[i];
  return v;
}

} // namespace detail

/// First primitive vector of the given norm in the box [-bound, bound]^rank,
/// in the deterministic enumeration order; absent if the box holds none.
inline std::optional<IntVec> find_vector_of_norm(const GramForm& form, const Int& target,
                                                 int bound) {
  const std::size_t n = form.rank();
  if (n == 0) return std::nullopt;
  std::optional<IntVec> hit;
  std::vector<long long> flat;
  if (detail::gram_fits_int64(form.gram(), flat) && bound <= 64 &&
      target >= std::numeric_limits<long long>::min() &&
      target <= std::numeric_limits<long long>::max()) {
    const long long t = static_cast<long long>(target);
    detail::enumerate_box(n, bound, [&](const std::vector<long long>& x) {
      if (detail::norm_int64(flat, n, x) != t) return false;
      if (!detail::primitive_int64(x)) return false;
      hit = detail::to_intvec(x);
      return true;
    });
    return hit;
  }
  detail::enumerate_box(n, bound, [&](const std::vector<long long>& x) {
    IntVec v = detail::to_intvec(x);
    if (norm(form, v) != target) return false;
    if (!is_primitive(v)) return false;
    hit = v;
    return true;
  });
  return hit;
}

namespace detail {

inline std::vector<int> doubling_bounds(int cap) {
  std::vector<int> bs;
  for (int b = 1; b < cap; b *= 2) bs.push_back(b);
  bs.push_back(cap);
  return bs;
}

/// Expanding-box search for a vector of norm +1 or -1. Within each box the
/// preferred sign wins; otherwise the first vector of the other sign found in
/// that box is used before the box grows.
inline IntVec search_unit_norm(const GramForm& form, bool prefer_plus, int cap) {
  for (int b : doubling_bounds(cap)) {
    auto plus = find_vector_of_norm(form, Int(1), b);
    auto minus = find_vector_of_norm(form, Int(-1), b);
    if (prefer_plus && plus) return *plus;
    if (!prefer_plus && minus) return *minus;
    if (plus) return *plus;
    if (minus) return *minus;
  }
  throw Error(errc::search_bound_exceeded,
              "no vector of norm +-1 within coefficient bound " + std::to_string(cap));
}

inline IntVec search_isotropic(const GramForm& form, int cap) {
  for (int b : doubling_bounds(cap)) {
    auto hit = find_vector_of_norm(form, Int(0), b);
    if (hit) return *hit;
  }
  throw Error(errc::search_bound_exceeded,
              "no primitive isotropic vector within coefficient bound " + std::to_string(cap));
}

/// A small w with c . w = 1: box searched first so the pairing partner has
/// small coordinates, extended-gcd fallback.
inline IntVec find_unit_pairing(const IntVec& c, int box_cap = 4);

/// Solves c . w = 1 for primitive c by chaining extended gcds.
inline IntVec solve_unit_pairing(const IntVec& c) {
  IntVec w(c.size(), Int(0));
  Int g = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    Int g2, s, t;
    xgcd(g, c[i], g2, s, t);
    for (Int& x : w) x *= s;
    w[i] += t;
    g = g2;
    if (g == 1) break;
  }
  if (g != 1)
    throw Error(errc::internal, "pairing functional is not epic");
  return w;
}

/// Babai rounding of w against the columns of k in the standard inner
/// product; each applied step strictly shrinks |w|^2.
inline void coordinate_reduce_against(IntVec& w, const IntMatrix& k) {
  bool changed = true;
  int passes = 64;
  while (changed && passes-- > 0) {
    changed = false;
    for (std::size_t j = 0; j < k.cols(); ++j) {
      IntVec col = k.col(j);
      Int den = dot(col, col);
      if (den == 0) continue;
      Int q = round_div(dot(w, col), den);
      if (q == 0) continue;
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= q * col[i];
      changed = true;
    }
  }
}

inline IntVec find_unit_pairing(const IntVec& c, int box_cap) {
  for (int b = 1; b <= box_cap; b *= 2) {
    std::optional<IntVec> hit;
    enumerate_box(c.size(), b, [&](const std::vector<long long>& x) {
      Int s = 0;
      for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * x[i];
      if (s != 1) return false;
      hit = to_intvec(x);
      return true;
    });
    if (hit) return *hit;
  }
  // extended-gcd solution, then shift by the kernel of c to shrink it
  IntVec w = solve_unit_pairing(c);
  IntMatrix row(1, c.size());
  for (std::size_t j = 0; j < c.size(); ++j) row(0, j) = c[j];
  coordinate_reduce_against(w, kernel_basis(row));
  return w;
}

/// Greedy integral size reduction of a sublattice basis: unimodular column
/// operations that strictly shrink a lexicographic cost on the induced Gram
/// matrix. Echelon-style kernel bases carry enough skew that the box searches
/// would otherwise need coefficients far beyond their caps. Heuristic; makes
/// no LLL-style quality guarantee.
inline IntMatrix reduce_span_basis(const GramForm& ambient, IntMatrix span) {
  const std::size_t m = span.cols();
  if (m < 2) return span;
  auto gram_of = [&](const IntMatrix& s) { return s.transpose() * ambient.gram() * s; };
  // cost: largest |diagonal| first, then total L1 mass; a diagonal
  // improvement is accepted even when it inflates cross terms
  auto cost_of = [](const IntMatrix& b) {
    Int diag = 0, mass = 0;
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) {
        Int a = b(i, j) < 0 ? Int(-b(i, j)) : b(i, j);
        mass += a;
        if (i == j && a > diag) diag = a;
      }
    return std::make_pair(diag, mass);
  };
  IntMatrix b = gram_of(span);
  auto cost = cost_of(b);
  bool improved = true;
  int budget = 4000; // heuristic pass; the searches tolerate leftover skew
  while (improved && budget-- > 0) {
    improved = false;
    for (std::size_t i = 0; i < m && !improved; ++i)
      for (std::size_t j = 0; j < m && !improved; ++j) {
        if (i == j) continue;
        std::vector<Int> shifts{1, -1};
        if (b(j, j) != 0) {
          Int k = round_div(b(i, j), b(j, j));
          if (k != 0 && k != 1 && k != -1) shifts.push_back(k);
        } else if (b(i, j) != 0 && b(i, i) != 0) {
          // isotropic direction: shrink the diagonal through the pairing
          Int k = round_div(b(i, i), 2 * b(i, j));
          if (k != 0 && k != 1 && k != -1) shifts.push_back(k);
        }
        for (const Int& k : shifts) {
          IntMatrix candidate = span;
          for (std::size_t r = 0; r < span.rows(); ++r)
            candidate(r, i) -= k * candidate(r, j);
          IntMatrix cb = gram_of(candidate);
          auto ccost = cost_of(cb);
          if (ccost < cost) {
            span = std::move(candidate);
            b = std::move(cb);
            cost = ccost;
            improved = true;
            break;
          }
        }
      }
  }
  return span;
}

/// Complement basis of x inside the sublattice spanned by the columns of
/// span, i.e. the kernel of y -> beta(x, S y) pushed back to ambient
/// coordinates.
inline IntMatrix orthogonal_complement_in(const GramForm& ambient, const IntMatrix& span,
                                          const IntVec& x_local) {
  // row vector (B x)^T where B is the induced Gram on the span
  IntMatrix b = span.transpose() * ambient.gram() * span;
  IntVec bx = b * x_local;
  IntMatrix row(1, bx.size());
  for (std::size_t j = 0; j < bx.size(); ++j) row(0, j) = bx[j];
  return span * kernel_basis(row);
}

} // namespace detail

inline BasisTransform hyperbolic_basis(const GramForm& form, int cap = kDefaultSearchCap);

/// Full-basis transform T with T^t G T = D^n exactly. Requires an odd
/// unimodular form of signature zero.
///
/// The recursion keeps |signature| <= 1 by steering the sign of the split
/// vector, so an even complement can only appear with signature zero, where a
/// hyperbolic basis exists and each plane is folded back into diagonal
/// vectors through the previous +-1 vector.
inline BasisTransform standard_orthogonal_basis(const GramForm& form,
                                                int cap = kDefaultSearchCap) {
  if (!is_unimodular(form)) throw Error(errc::not_unimodular, "form must be unimodular");
  if (parity(form) != Parity::odd) throw Error(errc::wrong_parity, "form must be odd");
  InertiaCounts inertia = signature(form);
  if (inertia.signature() != 0)
    throw Error(errc::nonzero_signature, "form must have signature zero");

  std::vector<IntVec> plus_cols, minus_cols;
  auto record = [&](const IntVec& v) {
    Int nv = norm(form, v);
    if (nv == 1)
      plus_cols.push_back(v);
    else if (nv == -1)
      minus_cols.push_back(v);
    else
      throw Error(errc::internal, "diagonalization produced a non-unit vector");
  };

  IntMatrix span = detail::reduce_span_basis(form, IntMatrix::identity(form.rank()));
  long long running_sig = 0;
  while (span.cols() > 0) {
    GramForm block(span.transpose() * form.gram() * span);
    IntVec x_local = detail::search_unit_norm(block, running_sig >= 0, cap);
    IntVec x = span * x_local;
    Int eps = norm(form, x);
    running_sig -= static_cast<long long>(eps);
    IntMatrix comp =
        detail::reduce_span_basis(form, detail::orthogonal_complement_in(form, span, x_local));
    GramForm comp_block(comp.transpose() * form.gram() * comp);
    if (comp.cols() > 0 && parity(comp_block) == Parity::even) {
      // fold <x> + H^m into 2m+1 orthogonal vectors of norm +-1
      BasisTransform th = hyperbolic_basis(comp_block, cap);
      IntMatrix planes = comp * th.matrix;
      IntVec seed = x;
      for (std::size_t p = 0; p + 1 < planes.cols(); p += 2) {
        IntVec u = planes.col(p);
        IntVec v = planes.col(p + 1);
        Int eps_seed = norm(form, seed);
        IntVec a(seed.size()), b(seed.size()), next(seed.size());
        for (std::size_t i = 0; i < seed.size(); ++i) {
          a[i] = seed[i] + u[i];
          if (eps_seed == 1) {
            b[i] = v[i] - seed[i] - u[i];
            next[i] = v[i] - seed[i];
          } else {
            b[i] = v[i] + seed[i] + u[i];
            next[i] = v[i] + seed[i];
          }
        }
        record(a);
        record(b);
        seed = next;
      }
      record(seed);
      break;
    }
    record(x);
    span = comp;
  }

  if (plus_cols.size() != minus_cols.size())
    throw Error(errc::internal, "signature bookkeeping failed in diagonalization");
  std::vector<IntVec> cols = plus_cols;
  cols.insert(cols.end(), minus_cols.begin(), minus_cols.end());
  BasisTransform t{IntMatrix::from_columns(form.rank(), cols), TransformRole::full_basis};
  if (t.matrix.transpose() * form.gram() * t.matrix != d_reference(plus_cols.size()).gram())
    throw Error(errc::internal, "diagonalization postcondition failed");
  return t;
}

/// Full-basis transform T with T^t G T = H^n exactly (adjacent hyperbolic
/// pairs). Requires an even unimodular form of signature zero.
inline BasisTransform hyperbolic_basis(const GramForm& form, int cap) {
  if (!is_unimodular(form)) throw Error(errc::not_unimodular, "form must be unimodular");
  if (parity(form) != Parity::even) throw Error(errc::wrong_parity, "form must be even");
  if (signature(form).signature() != 0)
    throw Error(errc::nonzero_signature, "form must have signature zero");

  std::vector<IntVec> cols;
  IntMatrix span = detail::reduce_span_basis(form, IntMatrix::identity(form.rank()));
  while (span.cols() > 0) {
    GramForm block(span.transpose() * form.gram() * span);
    IntVec u_local = detail::search_isotropic(block, cap);
    IntVec c = block.gram() * u_local; // pairing functional, primitive
    IntVec w_local = detail::find_unit_pairing(c);
    // kill the even self-pairing of w
    Int wn = dot(w_local, block.gram() * w_local);
    if (wn % 2 != 0) throw Error(errc::internal, "even form gave odd norm");
    Int half = wn / 2;
    for (std::size_t i = 0; i < w_local.size(); ++i) w_local[i] -= half * u_local[i];

    cols.push_back(span * u_local);
    cols.push_back(span * w_local);

    IntVec bu = block.gram() * u_local;
    IntVec bw = block.gram() * w_local;
    IntMatrix rows(2, bu.size());
    for (std::size_t j = 0; j < bu.size(); ++j) {
      rows(0, j) = bu[j];
      rows(1, j) = bw[j];
    }
    span = detail::reduce_span_basis(form, span * kernel_basis(rows));
  }

  BasisTransform t{IntMatrix::from_columns(form.rank(), cols), TransformRole::full_basis};
  if (t.matrix.transpose() * form.gram() * t.matrix != h_reference(cols.size() / 2).gram())
    throw Error(errc::internal, "hyperbolic basis postcondition failed");
  return t;
}

struct FormTriple {
  GramForm form;
  ModTwoFunctional g;
  IntegralFunctional f;
};

/// Orthogonal sum with k hyperbolic planes; functionals extend by zero.
inline FormTriple stabilize(const GramForm& form, const ModTwoFunctional& g,
                            const IntegralFunctional& f, std::size_t k) {
  FormTriple out{form, g, f};
  if (k == 0) return out;
  out.form = direct_sum(form, h_reference(k));
  out.g.bits.resize(g.bits.size() + 2 * k, 0);
  out.f.coeffs.resize(f.coeffs.size() + 2 * k, Int(0));
  return out;
}

inline FormTriple stabilize(const GramForm& form, const ModTwoFunctional& g, std::size_t k) {
  IntegralFunctional f;
  f.coeffs.assign(form.rank(), Int(0));
  return stabilize(form, g, f, k);
}

} // namespace xiform
