#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xiform/arf.hpp"
#include "xiform/classify.hpp"
#include "xiform/error.hpp"
#include "xiform/forms.hpp"

namespace xiform {

// Residue classes mod 2 are held as bitmasks, coordinate i at bit i. The
// exhaustive mod-2 stage is limited to this rank.
inline constexpr std::size_t kOracleRankLimit = 12;

enum class CertificateKind { mod2_exhaustion, mod4_norm };

inline const char* certificate_kind_name(CertificateKind k) {
  return k == CertificateKind::mod2_exhaustion ? "mod2-exhaustion" : "mod4-norm";
}

/// Machine-checkable refutation: the full list of maximal totally isotropic
/// mod-2 subspaces containing the dual vector of g, each killed by a residue
/// class whose every integral lift has nonzero norm mod 4. An empty list
/// (mod2-exhaustion) means the dual vector itself is not isotropic mod 2.
/// Replaying a certificate re-derives the refutation by modular arithmetic
/// alone, independent of any integral search.
struct RefutationCertificate {
  CertificateKind kind = CertificateKind::mod4_norm;
  std::vector<std::uint8_t> dual_vector;
  struct Entry {
    std::vector<std::uint32_t> basis; // canonical reduced basis masks
    std::uint32_t witness_class = 0;  // class with beta(x,x) != 0 mod 4
    int norm_mod4 = 0;
  };
  std::vector<Entry> subspaces;
};

struct OracleOutcome {
  enum class Verdict { found, refuted, unknown };
  Verdict verdict = Verdict::unknown;
  std::optional<LagrangianWitness> witness;
  std::optional<RefutationCertificate> certificate;
  std::string note;
};

inline const char* oracle_verdict_name(OracleOutcome::Verdict v) {
  switch (v) {
    case OracleOutcome::Verdict::found: return "found";
    case OracleOutcome::Verdict::refuted: return "refuted";
    case OracleOutcome::Verdict::unknown: return "unknown";
  }
  return "unknown";
}

namespace f2 {

inline std::uint32_t pack(const std::vector<std::uint8_t>& bits) {
  std::uint32_t m = 0;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) m |= (1u << i);
  return m;
}

inline std::vector<std::uint8_t> unpack(std::uint32_t mask, std::size_t n) {
  std::vector<std::uint8_t> bits(n, 0);
  for (std::size_t i = 0; i < n; ++i) bits[i] = (mask >> i) & 1u;
  return bits;
}

/// Gram matrix mod 2 as row masks plus the table x -> G x for all masks.
struct GramMod2 {
  std::size_t rank = 0;
  std::vector<std::uint32_t> mul; // mul[x] = G x over F2

  explicit GramMod2(const GramForm& form) {
    rank = form.rank();
    std::vector<std::uint32_t> rows(rank, 0);
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = 0; j < rank; ++j)
        if (form.gram()(i, j) % 2 != 0) rows[i] |= (1u << j);
    mul.assign(std::size_t(1) << rank, 0);
    for (std::uint32_t x = 0; x < mul.size(); ++x)
      for (std::size_t i = 0; i < rank; ++i)
        if (__builtin_parity(rows[i] & x)) mul[x] |= (1u << i);
  }

  int beta(std::uint32_t x, std::uint32_t y) const { return __builtin_parity(x & mul[y]); }
};

/// Canonical reduced basis of a span given by generator masks: pivot on the
/// highest set bit, fully reduced, sorted descending. Unique per subspace.
inline std::vector<std::uint32_t> canonical_basis(std::vector<std::uint32_t> gens) {
  std::vector<std::uint32_t> basis;
  for (std::uint32_t v : gens) {
    for (std::uint32_t b : basis) v = std::min(v, v ^ b);
    if (v) basis.push_back(v);
    std::sort(basis.rbegin(), basis.rend());
  }
  // full reduction to echelon form
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (i != j) basis[j] = std::min(basis[j], basis[j] ^ basis[i]);
  std::sort(basis.rbegin(), basis.rend());
  return basis;
}

inline std::vector<std::uint32_t> span_elements(const std::vector<std::uint32_t>& basis) {
  std::vector<std::uint32_t> out{0};
  for (std::uint32_t b : basis) {
    std::size_t sz = out.size();
    for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] ^ b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool in_span(const std::vector<std::uint32_t>& basis, std::uint32_t v) {
  for (std::uint32_t b : basis) v = std::min(v, v ^ b);
  return v == 0;
}

/// All maximal (half-rank) totally isotropic subspaces of the mod-2 form that
/// contain `seed` (ignored when zero), in canonical order.
inline std::vector<std::vector<std::uint32_t>> maximal_isotropic_containing(
    const GramMod2& g2, std::uint32_t seed) {
  const std::size_t n = g2.rank / 2;
  std::set<std::vector<std::uint32_t>> level;
  if (seed) {
    if (g2.beta(seed, seed) != 0) return {};
    level.insert(canonical_basis({seed}));
  } else {
    level.insert(std::vector<std::uint32_t>{});
  }
  for (std::size_t dim = seed ? 1 : 0; dim < n; ++dim) {
    std::set<std::vector<std::uint32_t>> next;
    for (const auto& basis : level) {
      for (std::uint32_t v = 1; v < g2.mul.size(); ++v) {
        if (g2.beta(v, v) != 0) continue;
        bool ok = true;
        for (std::uint32_t b : basis)
          if (g2.beta(v, b) != 0) { ok = false; break; }
        if (!ok || in_span(basis, v)) continue;
        std::vector<std::uint32_t> gens = basis;
        gens.push_back(v);
        next.insert(canonical_basis(gens));
      }
    }
    level = std::move(next);
  }
  return {level.begin(), level.end()};
}

} // namespace f2

/// beta(x,x) mod 4 of any integral lift of the residue class; well-defined
/// because x -> x + 2m shifts the norm by a multiple of 4.
inline int norm_mod4_of_class(const GramForm& form, std::uint32_t cls) {
  IntVec x = lift_mod2(f2::unpack(cls, form.rank()));
  Int n = norm(form, x) % 4;
  return static_cast<int>((n + 4) % 4);
}

namespace detail {

struct LiftSearch {
  const GramForm& form;
  const std::vector<std::uint32_t>& basis;
  int bound;
  long long budget;

  std::vector<std::vector<IntVec>> candidates;     // per basis slot
  std::vector<std::vector<long long>> fast_gram;   // int64 mirror when usable
  bool use_fast = false;

  explicit LiftSearch(const GramForm& f, const std::vector<std::uint32_t>& b, int bnd,
                      long long budget_in)
      : form(f), basis(b), bound(bnd), budget(budget_in) {}

  bool build_candidates() {
    const std::size_t rank = form.rank();
    std::vector<long long> flat;
    bool fast = detail::gram_fits_int64(form.gram(), flat) && bound <= 64;
    candidates.resize(basis.size());
    for (std::size_t slot = 0; slot < basis.size(); ++slot) {
      const std::uint32_t cls = basis[slot];
      detail::enumerate_box(rank, bound, [&](const std::vector<long long>& x) {
        if (--budget < 0) return true;
        for (std::size_t i = 0; i < rank; ++i) {
          bool want_odd = (cls >> i) & 1u;
          if (((x[i] & 1) != 0) != want_odd) return false;
        }
        if (fast) {
          if (detail::norm_int64(flat, rank, x) != 0) return false;
          if (!detail::primitive_int64(x)) return false;
        } else {
          IntVec v = detail::to_intvec(x);
          if (norm(form, v) != 0) return false;
          if (!is_primitive(v)) return false;
        }
        candidates[slot].push_back(detail::to_intvec(x));
        return false;
      });
      if (budget < 0) return false;
      if (candidates[slot].empty()) return true; // definitely no lift from this slot
    }
    return true;
  }

  std::optional<IntMatrix> run() {
    if (!build_candidates()) return std::nullopt; // budget exhausted mid-build
    for (const auto& c : candidates)
      if (c.empty()) return std::nullopt;
    std::vector<const IntVec*> chosen;
    IntMatrix result;
    if (backtrack(0, chosen, result)) return result;
    return std::nullopt;
  }

  bool backtrack(std::size_t slot, std::vector<const IntVec*>& chosen, IntMatrix& out) {
    if (slot == basis.size()) {
      std::vector<IntVec> cols;
      cols.reserve(chosen.size());
      for (const IntVec* p : chosen) cols.push_back(*p);
      IntMatrix s = IntMatrix::from_columns(form.rank(), cols);
      if (!is_saturated(s)) return false;
      out = s;
      return true;
    }
    for (const IntVec& cand : candidates[slot]) {
      if (--budget < 0) return false;
      bool ortho = true;
      for (const IntVec* prev : chosen)
        if (evaluate(form, *prev, cand) != 0) { ortho = false; break; }
      if (!ortho) continue;
      chosen.push_back(&cand);
      if (backtrack(slot + 1, chosen, out)) return true;
      chosen.pop_back();
      if (budget < 0) return false;
    }
    return false;
  }
};

} // namespace detail

/// Independent adjudicator for "ker g contains a Lagrangian". Stage (a)
/// enumerates every maximal totally isotropic mod-2 subspace containing the
/// dual vector of g -- any integral Lagrangian inside ker g reduces to one of
/// them. Stage (b) tries to kill each subspace with a mod-4 norm certificate.
/// Stage (c) searches bounded integral lifts of the surviving subspaces.
/// Refuted only when every subspace carries a certificate; Found only with a
/// verified witness; everything else is Unknown.
inline OracleOutcome lagrangian_oracle(const GramForm& form, const ModTwoFunctional& g,
                                       int coeff_bound,
                                       long long lift_budget = 20'000'000) {
  OracleOutcome out;
  const std::size_t rank = form.rank();
  if (rank % 2 != 0) throw Error(errc::precondition_violated, "rank must be even");
  if (!is_unimodular(form)) throw Error(errc::not_unimodular, "form must be unimodular");
  if (rank == 0) {
    out.verdict = OracleOutcome::Verdict::found;
    out.witness = LagrangianWitness{
        BasisTransform{IntMatrix(0, 0), TransformRole::sublattice_span}};
    return out;
  }
  if (rank > kOracleRankLimit) {
    out.verdict = OracleOutcome::Verdict::unknown;
    out.note = "rank exceeds the mod-2 enumeration limit (" +
               std::to_string(kOracleRankLimit) + ")";
    return out;
  }

  std::vector<std::uint8_t> wg = mod2_dual_vector(form, g);
  f2::GramMod2 g2(form);
  std::uint32_t wmask = f2::pack(wg);

  if (wmask != 0 && g2.beta(wmask, wmask) != 0) {
    RefutationCertificate cert;
    cert.kind = CertificateKind::mod2_exhaustion;
    cert.dual_vector = wg;
    out.verdict = OracleOutcome::Verdict::refuted;
    out.certificate = cert;
    out.note = "dual vector of g is not isotropic mod 2; no admissible subspace exists";
    return out;
  }

  auto subspaces = f2::maximal_isotropic_containing(g2, wmask);
  RefutationCertificate cert;
  cert.dual_vector = wg;
  std::vector<std::vector<std::uint32_t>> survivors;
  for (const auto& basis : subspaces) {
    std::uint32_t witness_class = 0;
    int witness_norm = 0;
    for (std::uint32_t cls : f2::span_elements(basis)) {
      if (cls == 0) continue;
      int n4 = norm_mod4_of_class(form, cls);
      if (n4 != 0) {
        witness_class = cls;
        witness_norm = n4;
        break;
      }
    }
    if (witness_class) {
      cert.subspaces.push_back({basis, witness_class, witness_norm});
    } else {
      survivors.push_back(basis);
    }
  }

  // A Lagrangian whose reduction is a certified subspace would contain an
  // isotropic integral vector in the witness class, impossible mod 4.
  for (const auto& basis : survivors) {
    detail::LiftSearch search(form, basis, coeff_bound, lift_budget);
    auto lifted = search.run();
    if (lifted) {
      LagrangianWitness w{BasisTransform{*lifted, TransformRole::sublattice_span}};
      if (!verify_lagrangian(form, g, w))
        throw Error(errc::internal, "oracle lift failed verification");
      out.verdict = OracleOutcome::Verdict::found;
      out.witness = w;
      return out;
    }
  }

  if (survivors.empty()) {
    // an isotropic dual vector always extends to a maximal isotropic subspace
    if (subspaces.empty())
      throw Error(errc::internal, "no admissible subspace despite an isotropic dual vector");
    cert.kind = CertificateKind::mod4_norm;
    out.verdict = OracleOutcome::Verdict::refuted;
    out.certificate = cert;
    return out;
  }
  out.verdict = OracleOutcome::Verdict::unknown;
  out.note = std::to_string(survivors.size()) +
             " admissible subspace(s) neither refuted nor lifted within bound " +
             std::to_string(coeff_bound);
  return out;
}

/// Re-derives a refutation from its certificate using modular arithmetic
/// only: recomputes the dual vector, re-enumerates the admissible subspaces,
/// checks the list matches the certificate exactly, and re-evaluates every
/// witness class norm mod 4.
inline bool replay_certificate(const GramForm& form, const ModTwoFunctional& g,
                               const RefutationCertificate& cert) {
  if (form.rank() == 0 || form.rank() > kOracleRankLimit) return false;
  std::vector<std::uint8_t> wg = mod2_dual_vector(form, g);
  if (wg != cert.dual_vector) return false;
  f2::GramMod2 g2(form);
  std::uint32_t wmask = f2::pack(wg);

  if (cert.kind == CertificateKind::mod2_exhaustion) {
    if (!cert.subspaces.empty()) return false;
    return wmask != 0 && g2.beta(wmask, wmask) != 0;
  }

  if (wmask != 0 && g2.beta(wmask, wmask) != 0) return false;
  auto expected = f2::maximal_isotropic_containing(g2, wmask);
  std::set<std::vector<std::uint32_t>> expected_set(expected.begin(), expected.end());
  std::set<std::vector<std::uint32_t>> covered;
  for (const auto& entry : cert.subspaces) {
    auto canon = f2::canonical_basis(entry.basis);
    if (!expected_set.count(canon)) return false;
    if (!f2::in_span(canon, entry.witness_class) || entry.witness_class == 0) return false;
    int n4 = norm_mod4_of_class(form, entry.witness_class);
    if (n4 == 0 || n4 != entry.norm_mod4) return false;
    covered.insert(canon);
  }
  return covered == expected_set;
}

} // namespace xiform
