#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "xiform/classify.hpp"
#include "xiform/error.hpp"
#include "xiform/forms.hpp"
#include "xiform/normal_form.hpp"

namespace xiform {

/// A verified half-rank sublattice: isotropic, saturated, inside ker g.
struct LagrangianWitness {
  BasisTransform span; // rank x n columns
};

/// The constructive pairing step of the odd case needs, inside each g-block
/// of the diagonal basis, equally many vectors of norm +1 and -1. When the
/// computed basis does not satisfy this, the construction stops here and the
/// caller falls back to the oracle.
struct PairingObstruction {
  std::size_t g1_plus = 0;
  std::size_t g1_minus = 0;
  std::string detail;
};

/// True iff the span has rank/2 columns, the form vanishes on it, it is a
/// direct summand (all elementary divisors one), and g kills every column.
inline bool verify_lagrangian(const GramForm& form, const ModTwoFunctional& g,
                              const LagrangianWitness& witness) {
  const IntMatrix& s = witness.span.matrix;
  if (s.rows() != form.rank()) return false;
  if (s.cols() * 2 != form.rank()) return false;
  if (!(s.transpose() * form.gram() * s).is_zero()) return false;
  if (!is_saturated(s)) return false;
  for (std::size_t j = 0; j < s.cols(); ++j)
    if (g(s.col(j)) != 0) return false;
  return true;
}

/// Arf-type invariant of an odd form: the number of basis vectors of a
/// standard orthogonal basis on which g is nonzero, mod 2. Basis independent.
inline int xi_odd(const GramForm& form, const ModTwoFunctional& g,
                  int cap = kDefaultSearchCap) {
  if (g.bits.size() != form.rank())
    throw Error(errc::dimension_mismatch, "functional rank mismatch");
  BasisTransform t = standard_orthogonal_basis(form, cap);
  int s = 0;
  for (std::size_t j = 0; j < t.matrix.cols(); ++j) s ^= g(t.matrix.col(j));
  return s;
}

/// Arf-type invariant of an even form: sum of g(e_i) g(f_i) over the planes
/// of a hyperbolic basis, mod 2. Basis independent.
inline int xi_even(const GramForm& form, const ModTwoFunctional& g,
                   int cap = kDefaultSearchCap) {
  if (g.bits.size() != form.rank())
    throw Error(errc::dimension_mismatch, "functional rank mismatch");
  BasisTransform t = hyperbolic_basis(form, cap);
  int s = 0;
  for (std::size_t p = 0; p + 1 < t.matrix.cols(); p += 2)
    s ^= g(t.matrix.col(p)) & g(t.matrix.col(p + 1));
  return s;
}

/// Constructive Lagrangian in ker g for an even form with xi_even = 0.
/// Planes where g is nonzero on both basis vectors are combined pairwise as
/// (e + e', f - f'); every other plane contributes its g-zero vector.
inline LagrangianWitness lagrangian_in_kernel_even(const GramForm& form,
                                                   const ModTwoFunctional& g,
                                                   int cap = kDefaultSearchCap) {
  BasisTransform t = hyperbolic_basis(form, cap);
  const std::size_t planes = t.matrix.cols() / 2;
  std::vector<std::size_t> hot; // planes with g(e) g(f) = 1
  std::vector<IntVec> cols;
  for (std::size_t p = 0; p < planes; ++p) {
    IntVec e = t.matrix.col(2 * p);
    IntVec f = t.matrix.col(2 * p + 1);
    if ((g(e) & g(f)) != 0) {
      hot.push_back(p);
    } else {
      cols.push_back(g(e) == 0 ? e : f);
    }
  }
  if (hot.size() % 2 != 0)
    throw Error(errc::invariant_nonzero, "xi_even is 1; no Lagrangian inside ker g exists");
  for (std::size_t i = 0; i + 1 < hot.size(); i += 2) {
    IntVec e1 = t.matrix.col(2 * hot[i]);
    IntVec f1 = t.matrix.col(2 * hot[i] + 1);
    IntVec e2 = t.matrix.col(2 * hot[i + 1]);
    IntVec f2 = t.matrix.col(2 * hot[i + 1] + 1);
    IntVec a(e1.size()), b(e1.size());
    for (std::size_t j = 0; j < e1.size(); ++j) {
      a[j] = e1[j] + e2[j];
      b[j] = f1[j] - f2[j];
    }
    cols.push_back(a);
    cols.push_back(b);
  }
  LagrangianWitness w{BasisTransform{IntMatrix::from_columns(form.rank(), cols),
                                     TransformRole::sublattice_span}};
  if (!verify_lagrangian(form, g, w))
    throw Error(errc::internal, "even-case construction failed verification");
  return w;
}

/// Constructive Lagrangian in ker g for an odd form with xi_odd = 0. The
/// diagonal basis is paired within each g-block by opposite norm signs and
/// each pair (p, m) contributes p + m. Reports the obstruction when the
/// computed basis admits no such pairing.
inline std::variant<LagrangianWitness, PairingObstruction> lagrangian_in_kernel_odd(
    const GramForm& form, const ModTwoFunctional& g, int cap = kDefaultSearchCap) {
  BasisTransform t = standard_orthogonal_basis(form, cap);
  std::vector<IntVec> block[2][2]; // [g value][norm sign: 0 plus, 1 minus]
  for (std::size_t j = 0; j < t.matrix.cols(); ++j) {
    IntVec v = t.matrix.col(j);
    int gv = g(v);
    int sgn = norm(form, v) == 1 ? 0 : 1;
    block[gv][sgn].push_back(v);
  }
  if ((block[1][0].size() + block[1][1].size()) % 2 != 0)
    throw Error(errc::invariant_nonzero, "xi_odd is 1; no Lagrangian inside ker g exists");
  if (block[1][0].size() != block[1][1].size()) {
    PairingObstruction obs;
    obs.g1_plus = block[1][0].size();
    obs.g1_minus = block[1][1].size();
    obs.detail = "g=1 block has " + std::to_string(obs.g1_plus) + " vectors of norm +1 and " +
                 std::to_string(obs.g1_minus) + " of norm -1; no sign-opposite pairing";
    return obs;
  }
  std::vector<IntVec> cols;
  for (int gv : {1, 0}) {
    for (std::size_t i = 0; i < block[gv][0].size(); ++i) {
      const IntVec& p = block[gv][0][i];
      const IntVec& m = block[gv][1][i];
      IntVec v(p.size());
      for (std::size_t j = 0; j < p.size(); ++j) v[j] = p[j] + m[j];
      cols.push_back(v);
    }
  }
  LagrangianWitness w{BasisTransform{IntMatrix::from_columns(form.rank(), cols),
                                     TransformRole::sublattice_span}};
  if (!verify_lagrangian(form, g, w))
    throw Error(errc::internal, "odd-case construction failed verification");
  return w;
}

} // namespace xiform
