#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "xiform/arf.hpp"

using namespace xiform;
using testsupport::bits_from_mask;

TEST(XiOdd, ReferenceValues) {
  EXPECT_EQ(xi_odd(d_reference(1), ModTwoFunctional{{1, 0}}), 1);
  EXPECT_EQ(xi_odd(d_reference(2), ModTwoFunctional{{1, 1, 0, 0}}), 0);
  EXPECT_EQ(xi_odd(d_reference(2), ModTwoFunctional{{1, 0, 0, 0}}), 1);
}

TEST(XiOdd, DirectSumWithEvenSummandDropsIt) {
  GramForm dh = direct_sum(d_reference(1), h_reference(1));
  for (std::uint32_t m1 = 0; m1 < 4; ++m1)
    for (std::uint32_t m2 = 0; m2 < 4; ++m2) {
      ModTwoFunctional g1 = bits_from_mask(m1, 2);
      ModTwoFunctional g2 = bits_from_mask(m2, 2);
      EXPECT_EQ(xi_odd(dh, direct_sum(g1, g2)), xi_odd(d_reference(1), g1));
    }
}

TEST(XiEven, ReferenceValues) {
  EXPECT_EQ(xi_even(h_reference(1), ModTwoFunctional{{1, 1}}), 1);
  EXPECT_EQ(xi_even(h_reference(1), ModTwoFunctional{{1, 0}}), 0);
  EXPECT_EQ(xi_even(h_reference(2), ModTwoFunctional{{1, 1, 1, 1}}), 0);
}

TEST(XiInvariance, ConjugationDoesNotChangeXi) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 120; ++trial) {
    std::uniform_int_distribution<std::size_t> half(1, 3);
    std::uniform_int_distribution<int> family(0, 1);
    std::size_t n = half(rng);
    bool odd = family(rng) == 0;
    GramForm ref = odd ? d_reference(n) : h_reference(n);
    ModTwoFunctional g = testsupport::random_functional(rng, 2 * n);
    IntMatrix u = testsupport::random_unimodular(rng, 2 * n, 3);
    GramForm moved = conjugate(ref, u);
    ModTwoFunctional g_moved = pullback(g, u);
    if (odd)
      EXPECT_EQ(xi_odd(moved, g_moved), xi_odd(ref, g));
    else
      EXPECT_EQ(xi_even(moved, g_moved), xi_even(ref, g));
  }
}

TEST(DirectSumFormula, OddPlusOddAdds) {
  for (std::uint32_t m1 = 0; m1 < 4; ++m1)
    for (std::uint32_t m2 = 0; m2 < 4; ++m2) {
      ModTwoFunctional g1 = bits_from_mask(m1, 2);
      ModTwoFunctional g2 = bits_from_mask(m2, 2);
      GramForm dd = direct_sum(d_reference(1), d_reference(1));
      EXPECT_EQ(xi_odd(dd, direct_sum(g1, g2)),
                (xi_odd(d_reference(1), g1) + xi_odd(d_reference(1), g2)) % 2);
    }
}

TEST(DirectSumFormula, EvenPlusEvenAdds) {
  for (std::uint32_t m1 = 0; m1 < 4; ++m1)
    for (std::uint32_t m2 = 0; m2 < 4; ++m2) {
      ModTwoFunctional g1 = bits_from_mask(m1, 2);
      ModTwoFunctional g2 = bits_from_mask(m2, 2);
      GramForm hh = direct_sum(h_reference(1), h_reference(1));
      EXPECT_EQ(xi_even(hh, direct_sum(g1, g2)),
                (xi_even(h_reference(1), g1) + xi_even(h_reference(1), g2)) % 2);
    }
}

TEST(LagrangianEven, PlaneWithZeroProductContributesItsKernelVector) {
  auto w = lagrangian_in_kernel_even(h_reference(1), ModTwoFunctional{{0, 0}});
  EXPECT_TRUE(verify_lagrangian(h_reference(1), ModTwoFunctional{{0, 0}}, w));
  EXPECT_EQ(w.span.matrix.col(0), (IntVec{1, 0}));

  auto w10 = lagrangian_in_kernel_even(h_reference(1), ModTwoFunctional{{1, 0}});
  EXPECT_TRUE(verify_lagrangian(h_reference(1), ModTwoFunctional{{1, 0}}, w10));
  EXPECT_EQ(w10.span.matrix.col(0), (IntVec{0, 1}));
}

TEST(LagrangianEven, PairedHotPlanes) {
  ModTwoFunctional g{{1, 1, 1, 1}};
  auto w = lagrangian_in_kernel_even(h_reference(2), g);
  EXPECT_TRUE(verify_lagrangian(h_reference(2), g, w));
  // basis order (e1, f1, e2, f2): columns e1+e2 and f1-f2
  EXPECT_EQ(w.span.matrix.col(0), (IntVec{1, 0, 1, 0}));
  EXPECT_EQ(w.span.matrix.col(1), (IntVec{0, 1, 0, -1}));
}

TEST(LagrangianEven, ThrowsWhenXiIsOne) {
  EXPECT_THROW(lagrangian_in_kernel_even(h_reference(1), ModTwoFunctional{{1, 1}}), Error);
}

TEST(LagrangianOdd, PairsWithOppositeSigns) {
  ModTwoFunctional zero{{0, 0}};
  auto attempt = lagrangian_in_kernel_odd(d_reference(1), zero);
  auto* w = std::get_if<LagrangianWitness>(&attempt);
  ASSERT_NE(w, nullptr);
  EXPECT_TRUE(verify_lagrangian(d_reference(1), zero, *w));

  ModTwoFunctional g{{1, 0, 1, 0}};
  auto attempt2 = lagrangian_in_kernel_odd(d_reference(2), g);
  auto* w2 = std::get_if<LagrangianWitness>(&attempt2);
  ASSERT_NE(w2, nullptr);
  EXPECT_TRUE(verify_lagrangian(d_reference(2), g, *w2));
}

TEST(LagrangianOdd, ReportsPairingObstruction) {
  ModTwoFunctional g{{1, 1, 0, 0}};
  auto attempt = lagrangian_in_kernel_odd(d_reference(2), g);
  auto* obs = std::get_if<PairingObstruction>(&attempt);
  ASSERT_NE(obs, nullptr);
  EXPECT_EQ(obs->g1_plus, 2u);
  EXPECT_EQ(obs->g1_minus, 0u);
}

TEST(LagrangianOdd, ThrowsWhenXiIsOne) {
  EXPECT_THROW(lagrangian_in_kernel_odd(d_reference(1), ModTwoFunctional{{1, 0}}), Error);
}

TEST(VerifyLagrangian, AcceptsAndRejects) {
  // D: span{e - f} is a Lagrangian in ker 0
  LagrangianWitness good{BasisTransform{IntMatrix{{1}, {-1}}, TransformRole::sublattice_span}};
  EXPECT_TRUE(verify_lagrangian(d_reference(1), ModTwoFunctional{{0, 0}}, good));

  // D^2: index-two sublattice is isotropic but not saturated
  LagrangianWitness unsaturated{
      BasisTransform{IntMatrix{{1, 1}, {1, -1}, {1, 1}, {1, -1}}, TransformRole::sublattice_span}};
  EXPECT_FALSE(verify_lagrangian(d_reference(2), ModTwoFunctional{{1, 1, 0, 0}}, unsaturated));

  // H: span{e} fails ker g when g(e) = 1
  LagrangianWitness span_e{BasisTransform{IntMatrix{{1}, {0}}, TransformRole::sublattice_span}};
  EXPECT_FALSE(verify_lagrangian(h_reference(1), ModTwoFunctional{{1, 0}}, span_e));
  EXPECT_TRUE(verify_lagrangian(h_reference(1), ModTwoFunctional{{0, 1}}, span_e));
}

TEST(EvenSufficiency, ExhaustiveUpToRankSix) {
  for (std::size_t n = 1; n <= 3; ++n) {
    GramForm form = h_reference(n);
    for (std::uint32_t mask = 0; mask < (1u << (2 * n)); ++mask) {
      ModTwoFunctional g = bits_from_mask(mask, 2 * n);
      if (xi_even(form, g) == 0) {
        auto w = lagrangian_in_kernel_even(form, g);
        EXPECT_TRUE(verify_lagrangian(form, g, w)) << "n=" << n << " mask=" << mask;
      } else {
        EXPECT_THROW(lagrangian_in_kernel_even(form, g), Error);
      }
    }
  }
}
