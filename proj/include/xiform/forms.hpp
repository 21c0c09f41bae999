#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "xiform/error.hpp"
#include "xiform/int_matrix.hpp"
#include "xiform/normal_form.hpp"
#include "xiform/signature.hpp"

namespace xiform {

enum class Parity { odd, even };

inline const char* parity_name(Parity p) { return p == Parity::odd ? "odd" : "even"; }

/// A symmetric bilinear form on a free abelian group, held as its Gram matrix
/// in a fixed basis.
class GramForm {
 public:
  GramForm() = default;

  explicit GramForm(IntMatrix gram) : gram_(std::move(gram)) {
    if (!gram_.is_square())
      throw Error(errc::not_symmetric, "Gram matrix must be square");
    for (std::size_t i = 0; i < gram_.rows(); ++i)
      for (std::size_t j = i + 1; j < gram_.cols(); ++j)
        if (gram_(i, j) != gram_(j, i))
          throw Error(errc::not_symmetric,
                      "Gram matrix differs at (" + std::to_string(i) + "," +
                          std::to_string(j) + ") and its mirror");
  }

  const IntMatrix& gram() const { return gram_; }
  std::size_t rank() const { return gram_.rows(); }

  friend bool operator==(const GramForm& a, const GramForm& b) { return a.gram_ == b.gram_; }

 private:
  IntMatrix gram_;
};

/// g : V -> Z/2 given by its values on the basis.
struct ModTwoFunctional {
  std::vector<std::uint8_t> bits;

  int operator()(const IntVec& x) const {
    if (x.size() != bits.size())
      throw Error(errc::dimension_mismatch, "functional/vector length mismatch");
    Int s = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) s += x[i];
    return static_cast<int>(((s % 2) + 2) % 2);
  }

  bool is_epic() const {
    for (auto b : bits) if (b) return true;
    return false;
  }

  friend bool operator==(const ModTwoFunctional&, const ModTwoFunctional&) = default;
};

/// f : V -> Z given by its coefficients on the basis.
struct IntegralFunctional {
  IntVec coeffs;

  Int operator()(const IntVec& x) const { return dot(coeffs, x); }

  bool is_epic() const { return content(coeffs) == 1; }

  ModTwoFunctional mod2() const {
    ModTwoFunctional g;
    g.bits.reserve(coeffs.size());
    for (const Int& c : coeffs) g.bits.push_back(static_cast<std::uint8_t>(((c % 2) + 2) % 2 != 0));
    return g;
  }

  friend bool operator==(const IntegralFunctional&, const IntegralFunctional&) = default;
};

inline Int determinant(const GramForm& f) { return determinant(f.gram()); }

inline bool is_unimodular(const GramForm& f) {
  Int d = determinant(f);
  return d == 1 || d == -1;
}

// beta(x,x) = sum x_i^2 G_ii + 2 sum_{i<j} x_i x_j G_ij, so evenness is
// decided by the diagonal alone.
inline Parity parity(const GramForm& f) {
  for (std::size_t i = 0; i < f.rank(); ++i)
    if (f.gram()(i, i) % 2 != 0) return Parity::odd;
  return Parity::even;
}

inline InertiaCounts signature(const GramForm& f) { return signature_of_symmetric(f.gram()); }

inline GramForm direct_sum(const GramForm& a, const GramForm& b) {
  return GramForm(block_diag(a.gram(), b.gram()));
}

inline ModTwoFunctional direct_sum(const ModTwoFunctional& a, const ModTwoFunctional& b) {
  ModTwoFunctional g = a;
  g.bits.insert(g.bits.end(), b.bits.begin(), b.bits.end());
  return g;
}

inline IntegralFunctional direct_sum(const IntegralFunctional& a, const IntegralFunctional& b) {
  IntegralFunctional f = a;
  f.coeffs.insert(f.coeffs.end(), b.coeffs.begin(), b.coeffs.end());
  return f;
}

inline Int evaluate(const GramForm& f, const IntVec& x, const IntVec& y) {
  if (x.size() != f.rank() || y.size() != f.rank())
    throw Error(errc::dimension_mismatch, "evaluate: vector length must equal the rank");
  return dot(x, f.gram() * y);
}

inline Int norm(const GramForm& f, const IntVec& x) { return evaluate(f, x, x); }

/// The unique w with g(x) = beta(x, w) mod 2. Exists because the Gram matrix
/// is invertible mod 2 for a unimodular form.
inline std::vector<std::uint8_t> mod2_dual_vector(const GramForm& f, const ModTwoFunctional& g) {
  if (g.bits.size() != f.rank())
    throw Error(errc::dimension_mismatch, "functional rank mismatch");
  if (!is_unimodular(f)) throw Error(errc::not_unimodular, "form must be unimodular");
  const std::size_t n = f.rank();
  // Gaussian elimination over F2 on [G mod 2 | g]
  std::vector<std::vector<std::uint8_t>> a(n, std::vector<std::uint8_t>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      a[i][j] = static_cast<std::uint8_t>(((f.gram()(i, j) % 2) + 2) % 2 != 0);
    a[i][n] = g.bits[i];
  }
  std::size_t row = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < n && row < n; ++c) {
    std::size_t p = row;
    while (p < n && !a[p][c]) ++p;
    if (p == n) continue;
    std::swap(a[p], a[row]);
    for (std::size_t i = 0; i < n; ++i)
      if (i != row && a[i][c])
        for (std::size_t j = c; j <= n; ++j) a[i][j] ^= a[row][j];
    pivot_col.push_back(c);
    ++row;
  }
  if (row != n) throw Error(errc::internal, "Gram matrix singular mod 2 despite unimodularity");
  std::vector<std::uint8_t> w(n, 0);
  for (std::size_t i = 0; i < n; ++i) w[pivot_col[i]] = a[i][n];
  return w;
}

inline IntVec lift_mod2(const std::vector<std::uint8_t>& bits) {
  IntVec v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) v[i] = bits[i] ? 1 : 0;
  return v;
}

/// Reference form D^n = n<1> + n<-1>, basis ordered e_1..e_n, f_1..f_n.
inline GramForm d_reference(std::size_t n) {
  IntVec d(2 * n);
  for (std::size_t i = 0; i < n; ++i) d[i] = 1;
  for (std::size_t i = n; i < 2 * n; ++i) d[i] = -1;
  return GramForm(IntMatrix::diagonal(d));
}

/// Reference form H^n, n adjacent hyperbolic planes (e_1,f_1,e_2,f_2,...).
inline GramForm h_reference(std::size_t n) {
  IntMatrix m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    m(2 * i, 2 * i + 1) = 1;
    m(2 * i + 1, 2 * i) = 1;
  }
  return GramForm(m);
}

/// Base change: the form carried through x = U x'.
inline GramForm conjugate(const GramForm& f, const IntMatrix& u) {
  return GramForm(u.transpose() * f.gram() * u);
}

/// Functionals transform contravariantly under x = U x'.
inline ModTwoFunctional pullback(const ModTwoFunctional& g, const IntMatrix& u) {
  ModTwoFunctional out;
  out.bits.resize(u.cols());
  for (std::size_t j = 0; j < u.cols(); ++j) {
    Int s = 0;
    for (std::size_t i = 0; i < u.rows(); ++i)
      if (g.bits[i]) s += u(i, j);
    out.bits[j] = static_cast<std::uint8_t>(((s % 2) + 2) % 2 != 0);
  }
  return out;
}

inline IntegralFunctional pullback(const IntegralFunctional& f, const IntMatrix& u) {
  IntegralFunctional out;
  out.coeffs.resize(u.cols());
  for (std::size_t j = 0; j < u.cols(); ++j) {
    Int s = 0;
    for (std::size_t i = 0; i < u.rows(); ++i) s += f.coeffs[i] * u(i, j);
    out.coeffs[j] = s;
  }
  return out;
}

} // namespace xiform
