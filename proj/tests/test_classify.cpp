#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "xiform/arf.hpp"
#include "xiform/classify.hpp"

using namespace xiform;

TEST(FindVector, UnitNormInDiagonal) {
  auto x = find_vector_of_norm(d_reference(1), Int(1), 1);
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(*x, (IntVec{1, 0}));
}

TEST(FindVector, IsotropicInHyperbolic) {
  auto x = find_vector_of_norm(h_reference(1), Int(0), 1);
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(*x, (IntVec{1, 0}));
}

TEST(FindVector, DefiniteFormHasNoIsotropicVector) {
  GramForm positive(IntMatrix::diagonal({Int(1), Int(1)}));
  EXPECT_FALSE(find_vector_of_norm(positive, Int(0), 5).has_value());
}

TEST(StandardOrthogonal, IdentityOnReference) {
  for (std::size_t n = 1; n <= 3; ++n) {
    BasisTransform t = standard_orthogonal_basis(d_reference(n));
    EXPECT_EQ(t.matrix, IntMatrix::identity(2 * n));
  }
}

TEST(StandardOrthogonal, FoldsHyperbolicSummand) {
  GramForm dh = direct_sum(d_reference(1), h_reference(1));
  BasisTransform t = standard_orthogonal_basis(dh);
  EXPECT_EQ(t.matrix.transpose() * dh.gram() * t.matrix, d_reference(2).gram());
  // basis order (e1, f1, e2, f2): the construction lands on
  // u1 = e1, u2 = f1+e2+f2, v1 = f1+e2, v2 = f1+f2
  IntMatrix expected{{1, 0, 0, 0}, {0, 1, 1, 1}, {0, 1, 1, 0}, {0, 1, 0, 1}};
  EXPECT_EQ(t.matrix, expected);
}

TEST(StandardOrthogonal, RandomConjugatesRoundTrip) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<std::size_t> half(1, 3);
    std::size_t n = half(rng);
    IntMatrix u = testsupport::random_unimodular(rng, 2 * n, 3);
    GramForm form = conjugate(d_reference(n), u);
    BasisTransform t = standard_orthogonal_basis(form);
    EXPECT_EQ(t.matrix.transpose() * form.gram() * t.matrix, d_reference(n).gram());
    EXPECT_TRUE(is_unimodular_matrix(t.matrix));
  }
}

TEST(StandardOrthogonal, Preconditions) {
  EXPECT_THROW(standard_orthogonal_basis(h_reference(1)), Error);          // even
  EXPECT_THROW(standard_orthogonal_basis(GramForm(IntMatrix::diagonal({Int(1), Int(1)}))),
               Error);                                                     // signature 2
  EXPECT_THROW(standard_orthogonal_basis(GramForm(IntMatrix::diagonal({Int(1), Int(-2)}))),
               Error);                                                     // det 2
}

TEST(Hyperbolic, IdentityOnReference) {
  EXPECT_EQ(hyperbolic_basis(h_reference(1)).matrix, IntMatrix::identity(2));
  EXPECT_EQ(hyperbolic_basis(h_reference(2)).matrix, IntMatrix::identity(4));
}

TEST(Hyperbolic, RandomConjugatesRoundTrip) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<std::size_t> half(1, 3);
    std::size_t n = half(rng);
    IntMatrix u = testsupport::random_unimodular(rng, 2 * n, 3);
    GramForm form = conjugate(h_reference(n), u);
    BasisTransform t = hyperbolic_basis(form);
    EXPECT_EQ(t.matrix.transpose() * form.gram() * t.matrix, h_reference(n).gram());
    EXPECT_TRUE(is_unimodular_matrix(t.matrix));
  }
}

TEST(Hyperbolic, Preconditions) {
  EXPECT_THROW(hyperbolic_basis(d_reference(1)), Error); // odd
}

TEST(ClassifyRoundTrip, ConjugatedFormsReachTheSameReference) {
  // classify(U^t G U) and classify(G) land on the same reference Gram matrix
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<std::size_t> half(1, 2);
    std::size_t n = half(rng);
    GramForm base = conjugate(d_reference(n), testsupport::random_unimodular(rng, 2 * n, 2));
    IntMatrix u = testsupport::random_unimodular(rng, 2 * n, 3);
    GramForm moved = conjugate(base, u);
    BasisTransform t1 = standard_orthogonal_basis(base);
    BasisTransform t2 = standard_orthogonal_basis(moved);
    EXPECT_EQ(t1.matrix.transpose() * base.gram() * t1.matrix,
              t2.matrix.transpose() * moved.gram() * t2.matrix);
  }
}

TEST(Stabilize, BlockAppendAndIdentityCase) {
  FormTriple st = stabilize(d_reference(1), ModTwoFunctional{{1, 0}}, 1);
  EXPECT_EQ(st.form.rank(), 4u);
  EXPECT_EQ(st.g, (ModTwoFunctional{{1, 0, 0, 0}}));
  EXPECT_EQ(st.form, direct_sum(d_reference(1), h_reference(1)));

  FormTriple same = stabilize(d_reference(1), ModTwoFunctional{{1, 0}}, 0);
  EXPECT_EQ(same.form, d_reference(1));
  EXPECT_EQ(same.g, (ModTwoFunctional{{1, 0}}));
}

TEST(Classify, SurvivesHeavySkew) {
  // well beyond the usual conjugation sizes; exercises the basis reduction
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<std::size_t> half(1, 4);
    std::uniform_int_distribution<int> family(0, 1);
    std::size_t n = half(rng);
    bool odd = family(rng) == 0;
    GramForm ref = odd ? d_reference(n) : h_reference(n);
    IntMatrix u = testsupport::random_unimodular(rng, 2 * n, 8, 150);
    GramForm form = conjugate(ref, u);
    BasisTransform t = odd ? standard_orthogonal_basis(form) : hyperbolic_basis(form);
    EXPECT_EQ(t.matrix.transpose() * form.gram() * t.matrix, ref.gram());
  }
}

TEST(Stabilize, PreservesXiOdd) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<std::size_t> half(1, 2);
    std::uniform_int_distribution<std::size_t> depth(1, 2);
    std::size_t n = half(rng);
    IntMatrix u = testsupport::random_unimodular(rng, 2 * n, 3);
    GramForm form = conjugate(d_reference(n), u);
    ModTwoFunctional g = testsupport::random_functional(rng, 2 * n);
    int before = xi_odd(form, g);
    FormTriple st = stabilize(form, g, depth(rng));
    EXPECT_EQ(xi_odd(st.form, st.g), before);
  }
}
