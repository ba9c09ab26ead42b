#include "fmm/builtins.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace fmm;

namespace {

Isotropy random_iso(MatShape s, std::mt19937_64& rng) { return random_unimodular_isotropy(s, rng); }

LrpDecomposition<GaussianRational> via_terms(const Isotropy& g, const LrpDecomposition<GaussianRational>& d) {
  std::vector<RankOneTensor<GaussianRational>> terms;
  for (std::size_t t = 0; t < d.rank(); ++t) terms.push_back(act_rank_one(g, term(d, t)));
  return from_terms(d.shape, terms);
}

}  // namespace

TEST(Isotropy, IdentityActsTrivially) {
  auto s = builtin_decomposition("strassen_2x2x2_7");
  EXPECT_EQ(act_lrp(Isotropy::identity(s.shape), s), to_gaussian(s));
}

TEST(Isotropy, LrpActionAgreesWithSandwiching) {
  std::mt19937_64 rng(1);
  auto s = to_gaussian(builtin_decomposition("strassen_2x2x2_7"));
  auto r = to_gaussian(builtin_decomposition("rational_4x4x4_48"));
  for (int it = 0; it < 5; ++it) {
    auto g = random_iso(s.shape, rng);
    EXPECT_EQ(act_lrp(g, s), via_terms(g, s));
    auto h = random_iso(r.shape, rng);
    EXPECT_EQ(act_lrp(h, r), via_terms(h, r));
  }
  auto g = builtin_isotropy("example_2x2_complex");
  EXPECT_EQ(act_lrp(g, s), via_terms(g, s));
}

TEST(Isotropy, OtherKroneckerOrderBreaksCorrectness) {
  std::mt19937_64 rng(2);
  auto s = to_gaussian(builtin_decomposition("rational_4x4x4_48"));
  auto g = random_iso(s.shape, rng);
  LrpDecomposition<GaussianRational> wrong{s.shape, s.L * kron(transpose(g.V()), g.U_inv()),
                                           s.R * kron(transpose(g.W()), g.V_inv()),
                                           kron(transpose(g.W_inv()), g.U()) * s.P};
  EXPECT_FALSE(verify_mm_tensor(wrong));
  EXPECT_TRUE(verify_mm_tensor(act_lrp(g, s)));
}

TEST(Isotropy, RandomUnimodularPreserveCorrectnessAndType) {
  std::mt19937_64 rng(3);
  auto r = builtin_decomposition("rational_4x4x4_48");
  auto type = tensor_type(r);
  for (int it = 0; it < 50; ++it) {
    auto g = random_iso(r.shape, rng);
    ASSERT_TRUE(g.unimodular());
    ASSERT_TRUE(g.is_real());
    auto e = act_lrp(g, r);
    EXPECT_TRUE(verify_mm_tensor(e));
    EXPECT_TRUE(is_real(e));
    EXPECT_EQ(tensor_type(e), type);
    EXPECT_EQ(act_lrp(inverse(g), e), to_gaussian(r));
  }
}

TEST(Isotropy, CompositionActsAsSuccessiveActions) {
  std::mt19937_64 rng(4);
  auto s = to_gaussian(builtin_decomposition("strassen_2x2x2_7"));
  for (int it = 0; it < 10; ++it) {
    auto g1 = random_iso(s.shape, rng), g2 = random_iso(s.shape, rng);
    EXPECT_EQ(act_lrp(compose(g1, g2), s), act_lrp(g1, act_lrp(g2, s)));
    EXPECT_EQ(compose(g1, inverse(g1)), Isotropy::identity(s.shape));
  }
  EXPECT_THROW(compose(Isotropy::identity({2, 2, 2}), Isotropy::identity({4, 4, 4})), std::invalid_argument);
}

TEST(Isotropy, RejectsSingularAndNonSquare) {
  CMatrix I = CMatrix::identity(2), Z(2, 2), N(2, 3);
  EXPECT_THROW(Isotropy(Z, I, I), std::domain_error);
  EXPECT_THROW(Isotropy(I, N, I), std::invalid_argument);
  EXPECT_THROW(act_lrp(Isotropy::identity({2, 2, 2}), builtin_decomposition("rational_4x4x4_48")),
               std::invalid_argument);
}

TEST(Isotropy, ComplexExampleImage) {
  auto g = builtin_isotropy("example_2x2_complex");
  EXPECT_FALSE(g.is_real());
  EXPECT_EQ(g.U()(1, 1), GaussianRational::i());
  auto s = builtin_decomposition("strassen_2x2x2_7");
  auto img = act_lrp(g, s);
  EXPECT_TRUE(verify_mm_tensor(img));
  EXPECT_FALSE(is_real(img));
  // first term: (a11 - i a22)(b11 + b22)(c11 + i c22)
  auto t0 = term(img, 0);
  EXPECT_EQ(t0.A(0, 0), GaussianRational(1));
  EXPECT_EQ(t0.A(1, 1), -GaussianRational::i());
  EXPECT_EQ(t0.C(1, 1), GaussianRational::i());
  EXPECT_EQ(tensor_type(img), tensor_type(s));
}

TEST(Isotropy, ComplexifierMapsRational48OutOfTheRationals) {
  auto g = builtin_isotropy("paper_4x4_complexifier");
  EXPECT_EQ(g.W(), CMatrix::identity(4));
  auto dets = g.determinants();
  EXPECT_FALSE(dets[0].is_zero());
  EXPECT_FALSE(dets[1].is_zero());
  auto r = builtin_decomposition("rational_4x4x4_48");
  auto img = act_lrp(g, r);
  EXPECT_TRUE(verify_mm_tensor(img));
  EXPECT_FALSE(is_real(img));
  EXPECT_EQ(tensor_type(img), tensor_type(r));
  auto back = act_lrp(inverse(g), img);
  EXPECT_TRUE(is_real(back));
  EXPECT_EQ(to_rational(back), r);
}
