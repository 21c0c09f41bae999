#pragma once

#include <array>
#include <string>
#include <vector>

#include "xiform/error.hpp"
#include "xiform/int_matrix.hpp"

namespace xiform {

/// One of the 28 oriented diffeomorphism classes of homotopy 7-spheres;
/// r = 0 is the standard sphere.
struct HomotopySphere {
  int r = 0;

  explicit HomotopySphere(int r_in) : r(((r_in % 28) + 28) % 28) {}
};

struct ManifoldDescriptor {
  int lambda = 0; // residue in Z/7
  std::string label;
};

/// Signature and characteristic number of a coboundary; the lambda invariant
/// reads off this record only when the signature vanishes.
struct CoboundaryRecord {
  Int sigma = 0;
  Int lambda_big = 0; // the integer Lambda(V)
};

inline int mod7(const Int& x) {
  Int r = x % 7;
  return static_cast<int>((r + 7) % 7);
}

/// lambda(M # Sigma_r) = lambda(M) - 3r mod 7.
inline int lambda_connected_sum(int lambda, int r) {
  long long v = (static_cast<long long>(lambda) - 3LL * r) % 7;
  return static_cast<int>((v + 7) % 7);
}

/// r -> -3r mod 7 for all 28 sphere classes. Surjects onto Z/7 with every
/// fiber of size four.
inline std::array<int, 28> classification_table() {
  std::array<int, 28> t{};
  for (int r = 0; r < 28; ++r) t[r] = lambda_connected_sum(0, r);
  return t;
}

/// {r : 3r = 0 mod 7} = {0, 7, 14, 21}, the subgroup of order 4.
inline std::vector<int> inertia_group() {
  std::vector<int> out;
  for (int r = 0; r < 28; ++r)
    if ((3 * r) % 7 == 0) out.push_back(r);
  return out;
}

inline bool are_diffeomorphic(const ManifoldDescriptor& a, const ManifoldDescriptor& b) {
  return a.lambda == b.lambda;
}

inline int lambda_from_coboundary(const CoboundaryRecord& rec) {
  if (rec.sigma != 0)
    throw Error(errc::nonzero_signature, "lambda requires a signature-zero coboundary");
  return mod7(rec.lambda_big);
}

/// Coboundary bookkeeping for a connected sum with Sigma_r: the signature
/// stays zero and Lambda gains 32r.
inline CoboundaryRecord coboundary_after_sum(const CoboundaryRecord& rec, int r) {
  if (rec.sigma != 0)
    throw Error(errc::nonzero_signature, "connected-sum bookkeeping requires signature zero");
  CoboundaryRecord out;
  out.sigma = 0;
  out.lambda_big = rec.lambda_big + 32 * Int(r);
  return out;
}

/// Two signature-zero coboundaries of the same manifold must agree mod 7.
inline bool check_well_definedness(const CoboundaryRecord& a, const CoboundaryRecord& b) {
  if (a.sigma != 0 || b.sigma != 0)
    throw Error(errc::nonzero_signature, "well-definedness check requires signature zero");
  return mod7(a.lambda_big) == mod7(b.lambda_big);
}

/// lambda(-M) = -lambda(M); the unique fixed point is lambda = 0.
inline ManifoldDescriptor reverse_orientation(const ManifoldDescriptor& m) {
  ManifoldDescriptor out = m;
  out.lambda = (7 - (m.lambda % 7) + 7) % 7;
  return out;
}

} // namespace xiform
