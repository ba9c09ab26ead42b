#include "fmm/builtins.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace fmm;

namespace {

const LrpScheme& plain() {
  static const LrpScheme s = rational48_slp_scheme();
  return s;
}
const AltScheme& alt() {
  static const AltScheme s = rational48_alt_scheme();
  return s;
}

template <Ring R>
std::pair<Matrix<value_t<R>>, Matrix<value_t<R>>> operands(const R& ring, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto A = random_matrix(ring, n, n, rng);
  auto B = random_matrix(ring, n, n, rng);
  return {A, B};
}

Rational pow_q(std::uint64_t b, std::size_t e) {
  BigInt r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= b;
  return Rational(r);
}

}  // namespace

TEST(Padding, SmallestPowerCovering) {
  for (std::size_t n = 1; n <= 33; ++n) {
    auto p = plan_padding(n, 4, 1);
    std::size_t want = 1, depth = 0;
    while (want < n) want *= 4, ++depth;
    EXPECT_EQ(p.padded, want) << n;
    EXPECT_EQ(p.depth, depth) << n;
    EXPECT_EQ(p.leaf, 1u);
  }
  auto p = plan_padding(33, 4, 8);
  EXPECT_EQ(p.depth, 2u);
  EXPECT_EQ(p.leaf, 3u);
  EXPECT_EQ(p.padded, 48u);
  EXPECT_THROW(plan_padding(4, 4, 0), std::invalid_argument);
}

TEST(Recursive, StrassenAllSmallSizes) {
  auto s = LrpScheme::from_decomposition(builtin_decomposition("strassen_2x2x2_7"), "strassen");
  ModularRing z(65521);
  for (std::size_t n = 1; n <= 33; ++n) {
    auto [A, B] = operands(z, n, n);
    EXPECT_TRUE(matrices_equal(z, multiply_recursive(z, s, A, B), multiply_naive(z, A, B))) << n;
  }
}

TEST(Recursive, Rational48PaddedSizes) {
  ModularRing z(65521);
  for (std::size_t n : {1, 2, 3, 5, 7, 9, 17, 33}) {
    auto [A, B] = operands(z, n, n);
    auto ref = multiply_naive(z, A, B);
    EXPECT_TRUE(matrices_equal(z, multiply_recursive(z, plain(), A, B), ref)) << n;
    EXPECT_TRUE(matrices_equal(z, multiply_alt_basis(z, alt(), A, B), ref)) << n;
    EXPECT_TRUE(matrices_equal(z, multiply_recursive(z, plain(), A, B, {3, false}), ref)) << n;
  }
}

TEST(Recursive, ExactRationals) {
  RationalRing q;
  for (std::size_t n : {4, 16}) {
    auto [A, B] = operands(q, n, 40 + n);
    auto ref = multiply_naive(q, A, B);
    EXPECT_EQ(multiply_recursive(q, plain(), A, B), ref);
    EXPECT_EQ(multiply_alt_basis(q, alt(), A, B), ref);
    EXPECT_EQ(multiply_recursive(q, builtin_decomposition("rational_4x4x4_48"), A, B), ref);
  }
  DyadicRing dy;
  auto [A, B] = operands(dy, 16, 1);
  EXPECT_TRUE(matrices_equal(dy, multiply_alt_basis(dy, alt(), A, B), multiply_naive(dy, A, B)));
}

TEST(AltBasis, SmallPrimes) {
  for (std::uint64_t p : {3u, 5u, 7u}) {
    ModularRing z(p);
    for (std::size_t n : {4, 16, 6}) {
      auto [A, B] = operands(z, n, p * n);
      EXPECT_TRUE(matrices_equal(z, multiply_alt_basis(z, alt(), A, B), multiply_naive(z, A, B))) << p << " " << n;
      EXPECT_TRUE(matrices_equal(z, multiply_recursive(z, plain(), A, B), multiply_naive(z, A, B))) << p << " " << n;
    }
  }
}

TEST(AltBasis, RejectsRingsWithoutInverseOfTwo) {
  IntegerRing zz;
  auto [A, B] = operands(zz, 4, 1);
  try {
    multiply_alt_basis(zz, alt(), A, B);
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("inverse of 2"), std::string::npos);
  }
  // the plain scheme needs halves as well
  EXPECT_THROW(multiply_recursive(zz, plain(), A, B), std::domain_error);
  // Strassen has integer coefficients
  auto s = builtin_decomposition("strassen_2x2x2_7");
  EXPECT_EQ(multiply_recursive(zz, s, A, B), multiply_naive(zz, A, B));
}

TEST(AltBasis, FactorizationAndRecomposition) {
  auto a = builtin_alt("rational_4x4x4_48_alt");
  EXPECT_EQ(a.rank(), 48u);
  EXPECT_EQ(a.basis(), 47u);
  EXPECT_EQ(a.base(), 4u);
  EXPECT_EQ(a.recompose(), builtin_decomposition("rational_4x4x4_48"));
  auto broken = a;
  broken.L_alt(0, 0) += Rational(1);
  EXPECT_FALSE(verify_mm_tensor(broken.recompose()));
}

TEST(Stages, MatrixAndSlpStagesAgree) {
  ModularRing z(65521);
  auto mat = LrpScheme::from_decomposition(builtin_decomposition("rational_4x4x4_48"));
  auto alt_mat = rational48_alt_scheme({}, false);
  for (std::size_t n : {4, 16, 20}) {
    auto [A, B] = operands(z, n, n);
    EXPECT_TRUE(matrices_equal(z, multiply_recursive(z, mat, A, B), multiply_recursive(z, plain(), A, B)));
    EXPECT_TRUE(matrices_equal(z, multiply_alt_basis(z, alt_mat, A, B), multiply_alt_basis(z, alt(), A, B)));
  }
  EXPECT_EQ(plain().stage_cost(), (OpCount{307, 34, 0}));
  EXPECT_EQ(alt().core_cost(), (OpCount{6, 0, 0}));
}

TEST(Counts, MeasuredEqualsPredicted) {
  ModularRing z(65521);
  for (std::size_t n : {4, 16, 64}) {
    for (std::size_t thr : {1, 4, 16}) {
      auto [A, B] = operands(z, n, n + thr);
      CountingRing<ModularRing> c1(z), c2(z);
      RecursionStats rs;
      AltStats as;
      multiply_recursive(c1, plain(), A, B, {thr, false}, &rs);
      multiply_alt_basis(c2, alt(), A, B, {thr, false}, &as);
      EXPECT_EQ(c1.counts(), *predict_counts(plain(), n, thr)) << n << " " << thr;
      EXPECT_EQ(rs.total(), c1.counts());
      auto ap = *predict_counts(alt(), n, thr);
      EXPECT_EQ(c2.counts(), ap.total()) << n << " " << thr;
      EXPECT_EQ(as.total(), c2.counts());
      EXPECT_EQ(as.transform_left, ap.transform_left);
      EXPECT_EQ(as.untransform, ap.untransform);
    }
  }
  EXPECT_FALSE(predict_counts(plain(), 5, 1));
}

TEST(Counts, TopLevelStageAtThresholdFour) {
  ModularRing z(65521);
  auto [A, B] = operands(z, 16, 1);
  CountingRing<ModularRing> c(z);
  RecursionStats rs;
  multiply_recursive(c, plain(), A, B, {4, false}, &rs);
  ASSERT_EQ(rs.stage_by_level.size(), 1u);
  EXPECT_EQ(rs.stage_by_level[0].linear(), 341u * 16u);
  EXPECT_EQ(rs.base, naive_counts(4) * 48);
  EXPECT_EQ(rs.base.total(), 48u * (64u + 48u));
}

TEST(Counts, ParallelMatchesSerial) {
  ModularRing z(65521);
  auto [A, B] = operands(z, 64, 2);
  CountingRing<ModularRing> cs(z), cp(z);
  auto Cs = multiply_recursive(cs, plain(), A, B, {1, false});
  auto Cp = multiply_recursive(cp, plain(), A, B, {1, true});
  EXPECT_TRUE(matrices_equal(z, Cs, Cp));
  EXPECT_EQ(cs.counts(), cp.counts());
  CountingRing<ModularRing> as(z), ap(z);
  EXPECT_TRUE(matrices_equal(z, multiply_alt_basis(as, alt(), A, B, {1, false}),
                             multiply_alt_basis(ap, alt(), A, B, {1, true})));
  EXPECT_EQ(as.counts(), ap.counts());
}

TEST(Float, DeviationSmallAtSize64) {
  FloatRing f;
  auto [A, B] = operands(f, 64, 3);
  auto ref = multiply_naive(f, A, B);
  for (const auto& C : {multiply_recursive(f, plain(), A, B), multiply_alt_basis(f, alt(), A, B)}) {
    double dev = 0;
    for (std::size_t i = 0; i < C.data().size(); ++i) dev = std::max(dev, std::abs(C.data()[i] - ref.data()[i]));
    EXPECT_LE(dev, 1e-9);
  }
}

TEST(ClosedForm, PlainScheme) {
  std::size_t n = 1;
  for (std::size_t k = 0; k <= 4; ++k, n *= 4) {
    auto rep = count_operations(CountScheme::plain_341, n);
    Rational want = Rational(373, 32) * pow_q(48, k) - Rational(341, 32) * pow_q(16, k);
    EXPECT_EQ(Rational(BigInt(rep.total().total())), want) << k;
    EXPECT_EQ(rep.core_closed_form, want);
    EXPECT_EQ(rep.cob().total(), 0u);
  }
  EXPECT_THROW(count_operations(CountScheme::plain_341, 8), std::invalid_argument);
}

TEST(ClosedForm, AlternativeBasis) {
  std::size_t n = 1;
  for (std::size_t k = 0; k <= 4; ++k, n *= 4) {
    auto rep = count_operations(CountScheme::alt_core_6, n);
    // core: T(4m) = 48 T(m) + 6 * 47^(k-1); basis changes: X(4m) = 47 X(m) + 328 m^2
    Rational core = Rational(7) * pow_q(48, k) - Rational(6) * pow_q(47, k);
    Rational cob = Rational(328) * (pow_q(47, k) - pow_q(16, k)) / Rational(31);
    EXPECT_EQ(Rational(BigInt(rep.core.total())), core) << k;
    EXPECT_EQ(Rational(BigInt(rep.cob().total())), cob) << k;
  }
  auto r4 = count_operations(CountScheme::alt_core_6, 4);
  EXPECT_EQ(r4.core, (OpCount{6, 0, 48}));
  EXPECT_EQ(r4.cob().linear(), 328u);
}

TEST(Benchmark, ReportsAgreementAndCounts) {
  auto rows = benchmark(AnyScheme(plain()), ModularRing(65521), {4, 16}, 1, {}, 7);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].matches_naive);
  EXPECT_EQ(rows[0].measured.total(), 389u);
  EXPECT_EQ(rows[1].measured.total(), 24128u);
  EXPECT_EQ(*rows[1].expected, rows[1].measured);
  auto frows = benchmark(AnyScheme(alt()), FloatRing{}, {16}, 1, {}, 7);
  ASSERT_TRUE(frows[0].max_deviation.has_value());
  EXPECT_TRUE(frows[0].matches_naive);
}
