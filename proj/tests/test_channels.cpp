#include "oracles.hpp"
#include "spincat/channels.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace spincat;

namespace {

// E[exp(-i phi dm)] for phi ~ N(0, sigma^2), by trapezoid quadrature.
cplx gaussian_phase_average(double sigma, double dm) {
  const int n = 8001;
  const double lo = -12.0 * sigma, hi = 12.0 * sigma;
  const double h = (hi - lo) / (n - 1);
  cplx sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double phi = lo + k * h;
    const double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
    const double pdf = std::exp(-0.5 * phi * phi / (sigma * sigma)) / (sigma * std::sqrt(2 * kPi));
    sum += w * pdf * std::exp(cplx(0.0, -phi * dm));
  }
  return sum * h;
}

}  // namespace

TEST(Dephasing, ParamsFromField) {
  const DephasingParams p = dephasing_params(0.78e-9, 1e-3, 1.2);
  const double w = 2 * kPi * 13.99624604e9 * 0.78e-9 * 1e-3;
  EXPECT_NEAR(p.chi, 0.5 * w * w, 1e-15);
  EXPECT_NEAR(p.sigma_phi, 1.2 * w, 1e-13);
  EXPECT_NEAR(sigma_phi_from_chi(p.chi, 1.2), p.sigma_phi, 1e-13);
  // mu_B sigma_B / hbar for 0.78 nT is about 68.59 rad/s.
  EXPECT_NEAR(kMuBOverHbar * 0.78e-9, 68.59, 0.01);
  EXPECT_THROW(dephasing_params(-1.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(dephasing_params(1.0, -1.0, 1.0), std::invalid_argument);
}

TEST(Dephasing, MatchesGaussianIntegral) {
  std::mt19937_64 gen(2);
  const SpinManifold m = SpinManifold::d52();
  const Operator rho0 = oracle::random_density(6, gen);
  for (double sigma : {0.1, 0.3, 0.7}) {
    const Operator out = dephase(DensityMatrix::from_matrix(rho0), m, sigma).matrix();
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) {
        const cplx factor = gaussian_phase_average(sigma, m.m(r) - m.m(c));
        EXPECT_LT(std::abs(out(r, c) - factor * rho0(r, c)), 1e-12);
      }
  }
}

TEST(Dephasing, PreservesStateInvariants) {
  std::mt19937_64 gen(3);
  for (int twoJ : {1, 3, 5}) {
    const SpinManifold m(twoJ);
    for (int rep = 0; rep < 10; ++rep) {
      const DensityMatrix rho = DensityMatrix::from_matrix(oracle::random_density(m.dim(), gen));
      const DensityMatrix out = dephase(rho, m, 0.05 + 0.1 * rep);
      EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
      EXPECT_GE(out.min_eigenvalue(), -1e-12);
      EXPECT_LT(max_abs(out.matrix().diagonal() - rho.matrix().diagonal()), 1e-15);
      EXPECT_TRUE(is_hermitian(out.matrix()));
    }
  }
}

TEST(Dephasing, CoherencesShrinkMonotonically) {
  std::mt19937_64 gen(4);
  const SpinManifold m = SpinManifold::d52();
  const DensityMatrix rho = DensityMatrix::from_matrix(oracle::random_density(6, gen));
  Operator prev = rho.matrix();
  for (double sigma = 0.0; sigma < 2.0; sigma += 0.1) {
    const Operator cur = dephase(rho, m, sigma).matrix();
    EXPECT_TRUE((cur.cwiseAbs().array() <= prev.cwiseAbs().array() + 1e-15).all());
    prev = cur;
  }
  EXPECT_LT(max_abs(dephase(rho, m, 0.0).matrix() - rho.matrix()), 1e-15);
}

TEST(Dephasing, RejectsBadInput) {
  const SpinManifold m = SpinManifold::d52();
  EXPECT_THROW(dephase(DensityMatrix::maximally_mixed(6), m, -0.1), std::invalid_argument);
  EXPECT_THROW(dephase(DensityMatrix::maximally_mixed(2), m, 0.1), std::invalid_argument);
}

TEST(ErrorUnitary, RotationSequenceIsJzRotation) {
  for (int twoJ : {1, 3, 5}) {
    const SpinManifold m(twoJ);
    Rng rng(5);
    for (int rep = 0; rep < 20; ++rep) {
      const ErrorSample s = sample_error_unitary(m, 0.8, rng);
      Operator expected = Operator::Zero(m.dim(), m.dim());
      for (int i = 0; i < m.dim(); ++i) expected(i, i) = std::exp(cplx(0.0, -s.phi * m.m(i)));
      EXPECT_LT(max_abs(s.unitary - expected), 1e-12);
    }
  }
  Rng rng(0);
  EXPECT_THROW(sample_error_unitary(SpinManifold::d52(), -1.0, rng), std::invalid_argument);
}

TEST(ErrorUnitary, SampleMeanApproachesChannel) {
  const int n = 20000;
  for (int twoJ : {1, 5}) {
    const SpinManifold m(twoJ);
    std::mt19937_64 gen(6);
    const DensityMatrix rho = DensityMatrix::from_matrix(oracle::random_density(m.dim(), gen));
    for (double sigma : {0.1, 0.7}) {
      Rng rng = Rng::stream(7, twoJ, static_cast<std::uint64_t>(sigma * 10));
      Operator mean = Operator::Zero(m.dim(), m.dim());
      for (int k = 0; k < n; ++k) {
        const ErrorSample s = sample_error_unitary(m, sigma, rng);
        mean += s.unitary * rho.matrix() * s.unitary.adjoint();
      }
      mean /= n;
      EXPECT_LT(max_abs(mean - dephase(rho, m, sigma).matrix()), 5.0 / std::sqrt(n));
    }
  }
}

TEST(ErrorOperators, PowersOfJz) {
  const SpinManifold m = SpinManifold::d52();
  const ErrorOperatorSet set = error_operator_set(m, 3);
  ASSERT_EQ(set.operators.size(), 4u);
  const auto ref = oracle::spin(5);
  EXPECT_LT(max_abs(set.operators[0] - Operator::Identity(6, 6)), 1e-15);
  EXPECT_LT(max_abs(set.operators[1] - ref.jz), 1e-15);
  EXPECT_LT(max_abs(set.operators[3] - ref.jz * ref.jz * ref.jz), 1e-12);
  EXPECT_THROW(error_operator_set(m, -1), std::invalid_argument);
}

TEST(Quadrupole, DiagonalPhaseInMSquared) {
  const SpinManifold m = SpinManifold::d52();
  const Operator u = quadrupole_unitary(m, 38.0, 1e-3);
  EXPECT_TRUE(is_unitary(u));
  for (int i = 0; i < 6; ++i) {
    const double mm = m.m(i);
    EXPECT_LT(std::abs(u(i, i) - std::exp(cplx(0.0, -2 * kPi * 38.0 * 1e-3 * mm * mm))), 1e-14);
  }
  EXPECT_LT(max_abs(quadrupole_unitary(m, 38.0, 1e-3) * quadrupole_unitary(m, -38.0, 1e-3) -
                    Operator::Identity(6, 6)),
            1e-14);
}
