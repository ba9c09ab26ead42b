#include "fmm/builtins.hpp"

#include <gtest/gtest.h>

#include <optional>
#include <random>

using namespace fmm;

namespace {

// Straight from the definition: T(a,b,c) = sum_t L(t,a) R(t,b) P(c,t), compared
// with [i2=j1][k1=i1][k2=j2] in lexicographic order of (i1,i2,j1,j2,k1,k2).
std::optional<std::array<std::size_t, 6>> first_violation(const LrpDecomposition<Rational>& d) {
  const auto [m, k, n] = d.shape;
  for (std::size_t i1 = 0; i1 < m; ++i1)
    for (std::size_t i2 = 0; i2 < k; ++i2)
      for (std::size_t j1 = 0; j1 < k; ++j1)
        for (std::size_t j2 = 0; j2 < n; ++j2)
          for (std::size_t k1 = 0; k1 < m; ++k1)
            for (std::size_t k2 = 0; k2 < n; ++k2) {
              Rational s;
              for (std::size_t t = 0; t < d.rank(); ++t)
                s += d.L(t, i1 * k + i2) * d.R(t, j1 * n + j2) * d.P(k1 * n + k2, t);
              Rational want = (i2 == j1 && k1 == i1 && k2 == j2) ? Rational(1) : Rational(0);
              if (s != want) return std::array<std::size_t, 6>{i1 + 1, i2 + 1, j1 + 1, j2 + 1, k1 + 1, k2 + 1};
            }
  return std::nullopt;
}

}  // namespace

TEST(Tensor, InferShape) {
  EXPECT_EQ(infer_shape(4, 4, 4), (MatShape{2, 2, 2}));
  EXPECT_EQ(infer_shape(16, 16, 16), (MatShape{4, 4, 4}));
  EXPECT_EQ(infer_shape(6, 12, 8), (MatShape{2, 3, 4}));
  EXPECT_THROW(infer_shape(5, 4, 4), std::invalid_argument);
}

TEST(Tensor, BuiltinsVerify) {
  EXPECT_TRUE(verify_mm_tensor(builtin_decomposition("strassen_2x2x2_7")));
  EXPECT_TRUE(verify_mm_tensor(builtin_decomposition("rational_4x4x4_48")));
  EXPECT_FALSE(first_violation(builtin_decomposition("strassen_2x2x2_7")));
}

TEST(Tensor, WitnessMatchesBruteForce) {
  auto s = builtin_decomposition("strassen_2x2x2_7");
  for (auto part : {&LrpDecomposition<Rational>::L, &LrpDecomposition<Rational>::R}) {
    for (std::size_t t = 0; t < 7; ++t)
      for (std::size_t j = 0; j < 4; ++j) {
        auto e = s;
        auto& x = (e.*part)(t, j);
        if (x.is_zero()) continue;
        x = -x;
        auto chk = verify_mm_tensor(e);
        auto want = first_violation(e);
        ASSERT_TRUE(want.has_value());
        ASSERT_FALSE(chk);
        EXPECT_EQ(chk.sextuple, *want);
      }
  }
  auto e = s;
  e.P(3, 0) = Rational(0);
  auto chk = verify_mm_tensor(e);
  ASSERT_FALSE(chk);
  EXPECT_EQ(chk.sextuple, *first_violation(e));
  EXPECT_EQ(chk.witness().substr(0, 13), "(1,1,1,1,2,2)");
}

TEST(Tensor, ContractionIsMatrixProduct) {
  auto d = builtin_decomposition("rational_4x4x4_48");
  RationalRing q;
  std::mt19937_64 rng(1);
  for (int it = 0; it < 10; ++it) {
    auto A = random_matrix(q, 4, 4, rng), B = random_matrix(q, 4, 4, rng);
    EXPECT_EQ(contract_bilinear(q, d, A, B), multiply_naive(q, A, B));
    EXPECT_EQ(contract_bilinear(d, A, B), A * B);
  }
}

TEST(Tensor, TypePolynomial) {
  auto ts = tensor_type(builtin_decomposition("strassen_2x2x2_7"));
  EXPECT_EQ(ts.str(), "X2Y2Z2+6XYZ");
  EXPECT_EQ(ts.coefficient(1, 1, 1), 6u);
  EXPECT_EQ(tensor_type(builtin_decomposition("rational_4x4x4_48")).str(), "16X2Y2Z2+32XYZ");
  TypePolynomial tp;
  tp.terms[{1, 2, 1}] = 1;
  tp.terms[{3, 1, 1}] = 2;
  tp.terms[{0, 0, 1}] = 1;
  EXPECT_EQ(tp.str(), "2X3YZ+XY2Z+Z");
}

TEST(Tensor, TermsRoundTrip) {
  auto d = builtin_decomposition("rational_4x4x4_48");
  std::vector<RankOneTensor<Rational>> terms;
  for (std::size_t t = 0; t < d.rank(); ++t) terms.push_back(term(d, t));
  EXPECT_EQ(from_terms(d.shape, terms), d);
}

TEST(Tensor, EquivalenceUpToScaling) {
  auto d = builtin_decomposition("rational_4x4x4_48");
  auto e = d;
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> v(1, 5);
  for (std::size_t t = 0; t < e.rank(); ++t) {
    Rational a(BigInt(v(rng)), BigInt(v(rng))), b(BigInt(-v(rng)), BigInt(v(rng)));
    Rational c = (a * b).inverse();
    for (std::size_t j = 0; j < 16; ++j) {
      e.L(t, j) *= a;
      e.R(t, j) *= b;
      e.P(j, t) *= c;
    }
  }
  // reverse the term order as well
  std::vector<RankOneTensor<Rational>> terms;
  for (std::size_t t = e.rank(); t-- > 0;) terms.push_back(term(e, t));
  auto f = from_terms(e.shape, terms);
  EXPECT_TRUE(equivalent_up_to_term_scaling(d, f));
  EXPECT_TRUE(verify_mm_tensor(f));
  // scalings whose product is not 1 are not allowed
  auto g = d;
  for (std::size_t j = 0; j < 16; ++j) g.L(5, j) *= Rational(2);
  EXPECT_FALSE(equivalent_up_to_term_scaling(d, g));
  EXPECT_FALSE(equivalent_up_to_term_scaling(d, builtin_decomposition("strassen_2x2x2_7")));
}

TEST(Tensor, TrilinearListing) {
  AssetStore st;
  auto tri = builtin_decomposition("rational_4x4x4_48_trilinear", st);
  EXPECT_TRUE(verify_mm_tensor(tri));
  EXPECT_TRUE(equivalent_up_to_term_scaling(tri, builtin_decomposition("rational_4x4x4_48", st)));
  // the listing as printed, before its two repairs, does not verify
  auto printed = decomposition_from_trilinear(st.slp("4x4x4_48_rational_trilinear-printed.slp"), {4, 4, 4});
  EXPECT_FALSE(verify_mm_tensor(printed));
}

TEST(Tensor, RejectsInconsistentFactors) {
  EXPECT_THROW((LrpDecomposition<Rational>{{2, 2, 2}, Matrix<Rational>(7, 4), Matrix<Rational>(6, 4),
                                           Matrix<Rational>(4, 7)}),
               std::invalid_argument);
  EXPECT_THROW((LrpDecomposition<Rational>{{2, 2, 2}, Matrix<Rational>(7, 4), Matrix<Rational>(7, 9),
                                           Matrix<Rational>(4, 7)}),
               std::invalid_argument);
}
