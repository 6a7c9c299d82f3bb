#include "oracles.hpp"
#include "spincat/spinops.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace spincat;

namespace {

const int kTwoJs[] = {1, 2, 3, 4, 5};

}  // namespace

TEST(SpinManifold, LabelsDescendFromPlusJ) {
  const SpinManifold m = SpinManifold::d52();
  EXPECT_EQ(m.dim(), 6);
  EXPECT_DOUBLE_EQ(m.g_factor(), 1.2);
  EXPECT_DOUBLE_EQ(m.m(0), 2.5);
  EXPECT_DOUBLE_EQ(m.m(5), -2.5);
  for (int i = 0; i < m.dim(); ++i) EXPECT_EQ(m.index_of_two_m(m.two_m(i)), i);
  EXPECT_THROW(m.index_of_two_m(7), std::invalid_argument);
  EXPECT_THROW(m.index_of_two_m(2), std::invalid_argument);
  EXPECT_THROW(SpinManifold(-1), std::invalid_argument);
  EXPECT_TRUE(SpinManifold::ground_qubit().half_integer());
  EXPECT_DOUBLE_EQ(SpinManifold::ground_qubit().g_factor(), 2.0);
}

TEST(AngularMomentum, MatchesLadderFormulas) {
  for (int twoJ : kTwoJs) {
    const auto ops = angular_momentum_ops(SpinManifold(twoJ));
    const auto ref = oracle::spin(twoJ);
    EXPECT_LT(max_abs(ops.jx - ref.jx), 1e-14) << twoJ;
    EXPECT_LT(max_abs(ops.jy - ref.jy), 1e-14) << twoJ;
    EXPECT_LT(max_abs(ops.jz - ref.jz), 1e-14) << twoJ;
  }
}

TEST(AngularMomentum, CommutatorsAndCasimir) {
  const cplx i(0.0, 1.0);
  for (int twoJ : kTwoJs) {
    const SpinManifold m(twoJ);
    const auto o = angular_momentum_ops(m);
    EXPECT_LT(max_abs(o.jx * o.jy - o.jy * o.jx - i * o.jz), 1e-12);
    EXPECT_LT(max_abs(o.jy * o.jz - o.jz * o.jy - i * o.jx), 1e-12);
    EXPECT_LT(max_abs(o.jz * o.jx - o.jx * o.jz - i * o.jy), 1e-12);
    const Operator casimir = o.jx * o.jx + o.jy * o.jy + o.jz * o.jz;
    const double j = m.j();
    EXPECT_LT(max_abs(casimir - j * (j + 1) * Operator::Identity(m.dim(), m.dim())), 1e-12);
    EXPECT_TRUE(is_hermitian(o.jx));
    EXPECT_TRUE(is_hermitian(o.jy));
    EXPECT_TRUE(is_hermitian(o.jz));
  }
}

TEST(Rotation, AgreesWithTaylorExponential) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int twoJ : kTwoJs) {
    const SpinManifold m(twoJ);
    const auto ref = oracle::spin(twoJ);
    for (int rep = 0; rep < 5; ++rep) {
      std::array<double, 3> n{u(gen), u(gen), u(gen)};
      const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
      for (auto& c : n) c /= norm;
      const double theta = 4.0 * u(gen);
      const Operator r = su2_rotation(m, n, theta);
      const Operator expected =
          oracle::expm_taylor(n[0] * ref.jx + n[1] * ref.jy + n[2] * ref.jz, theta);
      EXPECT_LT(max_abs(r - expected), 1e-12);
      EXPECT_TRUE(is_unitary(r));
    }
  }
}

TEST(Rotation, WignerSmallDExtremalElement) {
  // <J|R_y(beta)|J> = cos(beta/2)^{2J} and <-J|R_y(beta)|J> = sin(beta/2)^{2J}.
  for (int twoJ : kTwoJs) {
    const SpinManifold m(twoJ);
    for (double beta : {0.3, 1.1, kPi / 2, 2.9}) {
      const Operator r = rotation_y(m, beta);
      EXPECT_NEAR(r(0, 0).real(), std::pow(std::cos(beta / 2), twoJ), 1e-13);
      EXPECT_NEAR(r(m.dim() - 1, 0).real(), std::pow(std::sin(beta / 2), twoJ), 1e-13);
      EXPECT_NEAR(r(0, 0).imag(), 0.0, 1e-14);
    }
  }
}

TEST(Rotation, FullTurnIsMinusIdentityForHalfInteger) {
  for (int twoJ : kTwoJs) {
    const SpinManifold m(twoJ);
    const Operator id = Operator::Identity(m.dim(), m.dim());
    const double sign = m.half_integer() ? -1.0 : 1.0;
    EXPECT_LT(max_abs(rotation_x(m, 2 * kPi) - sign * id), 1e-12);
    EXPECT_LT(max_abs(rotation_y(m, 4 * kPi) - id), 1e-12);
  }
}

TEST(Rotation, ComposesAboutAFixedAxis) {
  const SpinManifold m = SpinManifold::d52();
  EXPECT_LT(max_abs(rotation_y(m, 0.4) * rotation_y(m, 0.7) - rotation_y(m, 1.1)), 1e-12);
  EXPECT_LT(max_abs(rotation_z(m, -0.3).adjoint() - rotation_z(m, 0.3)), 1e-12);
}

TEST(Rotation, QuarterTurnAboutYMapsJzToJx) {
  // R_y(pi/2) Jz R_y(-pi/2) = Jx; the opposite ordering gives -Jx.
  for (int twoJ : kTwoJs) {
    const SpinManifold m(twoJ);
    const auto o = angular_momentum_ops(m);
    const Operator a = rotation_y(m, kPi / 2) * o.jz * rotation_y(m, -kPi / 2);
    EXPECT_LT(max_abs(a - o.jx), 1e-12);
    const Operator b = rotation_y(m, -kPi / 2) * o.jz * rotation_y(m, kPi / 2);
    EXPECT_LT(max_abs(b + o.jx), 1e-12);
  }
}

TEST(Rotation, RejectsBadInput) {
  const SpinManifold m = SpinManifold::d52();
  EXPECT_THROW(su2_rotation(m, {1.0, 1.0, 0.0}, 0.1), std::invalid_argument);
  Operator h = Operator::Zero(2, 2);
  h(0, 1) = 1.0;
  EXPECT_THROW(expm_antihermitian(h, 1.0), std::invalid_argument);
  EXPECT_THROW(expm_antihermitian(Operator::Zero(2, 3), 1.0), std::invalid_argument);
}

TEST(BasisState, IsUnitVector) {
  const StateVector v = basis_state(6, 2);
  EXPECT_DOUBLE_EQ(v.norm(), 1.0);
  EXPECT_EQ(v(2), cplx(1.0, 0.0));
}
