#include "spincat/channels.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace spincat {

DephasingParams dephasing_params(double sigmaB, double t, double gJ) {
  if (sigmaB < 0.0 || t < 0.0)
    throw std::invalid_argument("dephasing_params: sigmaB and t must be >= 0");
  DephasingParams p;
  p.sigma_b = sigmaB;
  p.t = t;
  p.g_j = gJ;
  const double field_phase = kMuBOverHbar * sigmaB * t;
  p.sigma_phi = gJ * field_phase;
  p.chi = 0.5 * field_phase * field_phase;
  return p;
}

DensityMatrix dephase(const DensityMatrix& rho, const SpinManifold& manifold,
                      double sigmaPhi) {
  if (sigmaPhi < 0.0) throw std::invalid_argument("dephase: sigmaPhi must be >= 0");
  if (rho.dim() != manifold.dim())
    throw std::invalid_argument("dephase: dimension mismatch");
  Operator out = rho.matrix();
  const double s2 = sigmaPhi * sigmaPhi;
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) {
      const double dm = manifold.m(r) - manifold.m(c);
      out(r, c) *= std::exp(-0.5 * s2 * dm * dm);
    }
  return DensityMatrix::unchecked(std::move(out));
}

ErrorSample sample_error_unitary(const SpinManifold& manifold, double sigmaPhi,
                                 Rng& rng) {
  if (sigmaPhi < 0.0)
    throw std::invalid_argument("sample_error_unitary: sigmaPhi must be >= 0");
  std::normal_distribution<double> normal(0.0, 1.0);
  ErrorSample s;
  s.phi = sigmaPhi * normal(rng);
  s.unitary = rotation_y(manifold, -kPi / 2) * rotation_x(manifold, s.phi) *
              rotation_y(manifold, kPi / 2);
  return s;
}

ErrorOperatorSet error_operator_set(const SpinManifold& manifold, int maxOrder) {
  if (maxOrder < 0) throw std::invalid_argument("error_operator_set: maxOrder must be >= 0");
  ErrorOperatorSet set{manifold, maxOrder, {}};
  const int d = manifold.dim();
  for (int k = 0; k <= maxOrder; ++k) {
    Operator e = Operator::Zero(d, d);
    for (int i = 0; i < d; ++i) e(i, i) = std::pow(manifold.m(i), k);
    set.operators.push_back(std::move(e));
  }
  return set;
}

Operator quadrupole_unitary(const SpinManifold& manifold, double deltaQ, double t) {
  if (t < 0.0) throw std::invalid_argument("quadrupole_unitary: t must be >= 0");
  const int d = manifold.dim();
  Operator u = Operator::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double m = manifold.m(i);
    u(i, i) = std::exp(cplx(0.0, -2.0 * kPi * deltaQ * t * m * m));
  }
  return u;
}

}  // namespace spincat
