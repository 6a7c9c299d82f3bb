#include "oracles.hpp"
#include "spincat/code.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace spincat;

namespace {

// Binomial spin-cat codewords: |0> on odd indices, |1> on even indices,
// amplitude sqrt(C(2J, i) / 2^{2J-1}).
CodewordPair binomial_codewords(int twoJ) {
  const SpinManifold m(twoJ);
  CodewordPair p{m, StateVector::Zero(m.dim()), StateVector::Zero(m.dim())};
  for (int i = 0; i < m.dim(); ++i) {
    const double a = std::sqrt(oracle::binomial(twoJ, i) / std::pow(2.0, twoJ - 1));
    (i % 2 ? p.zero : p.one)(i) = a;
  }
  return p;
}

}  // namespace

TEST(Codewords, TabulatedAmplitudes) {
  const CodewordPair c = spin_cat_codewords(SpinManifold::d52());
  const SpinManifold& m = c.manifold;
  EXPECT_NEAR(c.zero(m.index_of_two_m(-5)).real(), 0.25, 1e-14);
  EXPECT_NEAR(c.zero(m.index_of_two_m(-1)).real(), std::sqrt(2.5) / 2, 1e-14);
  EXPECT_NEAR(c.zero(m.index_of_two_m(3)).real(), std::sqrt(5.0) / 4, 1e-14);
  EXPECT_NEAR(c.one(m.index_of_two_m(5)).real(), 0.25, 1e-14);
  EXPECT_NEAR(c.one(m.index_of_two_m(1)).real(), std::sqrt(2.5) / 2, 1e-14);
  EXPECT_NEAR(c.one(m.index_of_two_m(-3)).real(), std::sqrt(5.0) / 4, 1e-14);
  const CodewordPair t = tabulated_d52_codewords();
  EXPECT_LT((c.zero - t.zero).norm(), 1e-14);
  EXPECT_LT((c.one - t.one).norm(), 1e-14);
}

TEST(Codewords, BinomialForEveryHalfIntegerSpin) {
  for (int twoJ : {1, 3, 5, 7}) {
    const CodewordPair c = spin_cat_codewords(SpinManifold(twoJ));
    const CodewordPair ref = binomial_codewords(twoJ);
    EXPECT_LT((c.zero - ref.zero).norm(), 1e-12) << twoJ;
    EXPECT_LT((c.one - ref.one).norm(), 1e-12) << twoJ;
    EXPECT_NEAR(c.zero.norm(), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(c.zero.dot(c.one)), 0.0, 1e-14);
  }
  EXPECT_THROW(spin_cat_codewords(SpinManifold(4)), std::invalid_argument);
}

TEST(Codewords, DecodeToExtremalCat) {
  const SpinManifold m = SpinManifold::d52();
  const CodewordPair c = spin_cat_codewords(m);
  const Operator dec = decode_unitary(m);
  EXPECT_LT(max_abs(dec * encode_unitary(m) - Operator::Identity(6, 6)), 1e-12);
  EXPECT_LT(max_abs(encode_unitary(m) - oracle::expm_taylor(oracle::spin(5).jy, -kPi / 2)), 1e-12);
  StateVector minus = StateVector::Zero(6), plus = StateVector::Zero(6);
  minus(5) = -1.0 / std::sqrt(2.0);
  minus(0) = 1.0 / std::sqrt(2.0);
  plus(5) = plus(0) = 1.0 / std::sqrt(2.0);
  // (|-J> - |+J>)/sqrt(2) and (|-J> + |+J>)/sqrt(2), up to a global phase.
  EXPECT_NEAR(std::abs(minus.dot(dec * c.zero)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(plus.dot(dec * c.one)), 1.0, 1e-12);
}

TEST(Codewords, EncodedExtremalStatesAreJxEigenstates) {
  // U_enc |m> is a Jx eigenvector with eigenvalue -m.
  const SpinManifold m = SpinManifold::d52();
  const auto jx = oracle::spin(5).jx;
  const Operator enc = encode_unitary(m);
  for (int i = 0; i < 6; ++i) {
    const StateVector v = enc.col(i);
    EXPECT_LT((jx * v + m.m(i) * v).norm(), 1e-12);
    EXPECT_NEAR(std::abs(v.dot(jx * v).real()), std::abs(m.m(i)), 1e-12);
  }
}

TEST(PrepareLogical, SuperpositionAndValidation) {
  const CodewordPair c = spin_cat_codewords(SpinManifold::d52());
  const double r = 1.0 / std::sqrt(2.0);
  const StateVector psi = prepare_logical({cplx(r, 0), cplx(0, -r)}, c);
  EXPECT_LT((psi - r * c.zero + cplx(0, r) * c.one).norm(), 1e-15);
  EXPECT_THROW(prepare_logical({cplx(1, 0), cplx(1, 0)}, c), std::invalid_argument);
}

TEST(Rational, ReducedArithmetic) {
  const Rational a = Rational::make(2, 8);
  EXPECT_EQ(a.num, 1);
  EXPECT_EQ(a.den, 4);
  EXPECT_EQ(a + Rational::make(1, 4), Rational::make(1, 2));
  EXPECT_EQ(a * Rational::make(-4, 3), Rational::make(-1, 3));
  EXPECT_EQ(Rational::make(3, -6).str(), "-1/2");
  EXPECT_EQ(Rational::make(65, 16).str(), "65/16");
  EXPECT_EQ(Rational::make(4, 2).str(), "2");
  EXPECT_THROW(Rational::make(1, 0), std::invalid_argument);
}

TEST(KnillLaflamme, SecondOrderExact) {
  const SpinManifold m = SpinManifold::d52();
  const KLReport r = kl_conditions(spin_cat_codewords(m), error_operator_set(m, 2));
  EXPECT_TRUE(r.exact);
  EXPECT_TRUE(r.satisfied);
  ASSERT_EQ(r.entries.size(), 9u);
  for (const auto& e : r.entries) {
    ASSERT_TRUE(e.exact_zero_zero && e.exact_one_one && e.exact_zero_one);
    EXPECT_EQ(*e.exact_zero_zero, *e.exact_one_one);
    EXPECT_EQ(*e.exact_zero_one, Rational{});
    EXPECT_LE(std::abs(e.zero_one), 1e-12);
    const int p = e.j + e.k;
    const Rational expected = p == 0   ? Rational::make(1, 1)
                              : p == 2 ? Rational::make(5, 4)
                              : p == 4 ? Rational::make(65, 16)
                                       : Rational{};
    EXPECT_EQ(*e.exact_zero_zero, expected) << e.j << "," << e.k;
    EXPECT_NEAR(e.zero_zero.real(), expected.value(), 1e-12);
    EXPECT_NEAR(e.one_one.real(), expected.value(), 1e-12);
  }
}

TEST(KnillLaflamme, ThirdOrderViolated) {
  const SpinManifold m = SpinManifold::d52();
  const KLReport r = kl_conditions(spin_cat_codewords(m), error_operator_set(m, 3));
  EXPECT_FALSE(r.satisfied);
  // Brute force over the 4x4 pair table: odd total powers of order 5 differ
  // in sign between the codewords.
  int violated = 0;
  for (const auto& e : r.entries) {
    double a = 0.0, b = 0.0;
    const auto c = binomial_codewords(5);
    for (int i = 0; i < 6; ++i) {
      const double mp = std::pow(m.m(i), e.j + e.k);
      a += std::norm(c.zero(i)) * mp;
      b += std::norm(c.one(i)) * mp;
    }
    const bool ok = std::abs(a - b) < 1e-12;
    EXPECT_EQ(ok, e.satisfied) << e.j << "," << e.k;
    if (!ok) ++violated;
  }
  EXPECT_GT(violated, 0);
}

TEST(KnillLaflamme, FloatPathForGeneralOperators) {
  const SpinManifold m = SpinManifold::d52();
  ErrorOperatorSet errs = error_operator_set(m, 1);
  errs.operators[1] = oracle::spin(5).jx;
  const KLReport r = kl_conditions(spin_cat_codewords(m), errs);
  EXPECT_FALSE(r.exact);
  // Jx flips between codewords: <0|Jx|1> is nonzero.
  EXPECT_FALSE(r.satisfied);
  for (const auto& e : r.entries) EXPECT_FALSE(e.exact_zero_zero.has_value());
}

TEST(Hamming, SpinFiveHalvesSaturates) {
  const HammingReport h = hamming_saturation(SpinManifold::d52());
  EXPECT_EQ(h.syndrome_classes, 3);
  EXPECT_EQ(h.dimension, 6);
  EXPECT_TRUE(h.saturated);
  EXPECT_FALSE(hamming_saturation(SpinManifold::d52(), 1).saturated);
  EXPECT_THROW(hamming_saturation(SpinManifold(4)), std::invalid_argument);
}
