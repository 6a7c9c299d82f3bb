#pragma once

#include "spincat/rng.hpp"
#include "spincat/spinops.hpp"
#include "spincat/state.hpp"

#include <cmath>
#include <vector>

namespace spincat {

/// mu_B / hbar in rad s^-1 T^-1 (CODATA: 13.99624604 GHz/T).
inline constexpr double kMuBOverHbar = 2.0 * kPi * 13.99624604e9;

/// Quasi-static Gaussian field noise expressed as a phase width and the
/// dimensionless dephasing parameter chi = (mu_B sigma_B t / hbar)^2 / 2.
struct DephasingParams {
  double sigma_b = 0.0;  ///< tesla
  double t = 0.0;        ///< seconds
  double g_j = 1.0;
  double sigma_phi = 0.0;  ///< radians, g_J mu_B sigma_B t / hbar
  double chi = 0.0;
};

DephasingParams dephasing_params(double sigmaB, double t, double gJ);

/// sigma_phi = g_J * sqrt(2 chi).
inline double sigma_phi_from_chi(double chi, double gJ) {
  return gJ * std::sqrt(2.0 * chi);
}

/// Gaussian dephasing channel: rho_mn -> exp(-sigma^2 (m-n)^2 / 2) rho_mn.
DensityMatrix dephase(const DensityMatrix& rho, const SpinManifold& manifold,
                      double sigmaPhi);

struct ErrorSample {
  double phi = 0.0;
  Operator unitary;
};

/// Draws phi ~ N(0, sigma^2) and returns the composite rotation
/// R_y(-pi/2) R_x(phi) R_y(pi/2), which equals exp(-i phi Jz).
ErrorSample sample_error_unitary(const SpinManifold& manifold, double sigmaPhi,
                                 Rng& rng);

struct ErrorOperatorSet {
  SpinManifold manifold;
  int max_order = 0;
  std::vector<Operator> operators;  ///< operators[k] = Jz^k
};

ErrorOperatorSet error_operator_set(const SpinManifold& manifold, int maxOrder);

/// exp(-i 2 pi deltaQ t Jz^2). Positive deltaQ raises the outer |m| levels.
Operator quadrupole_unitary(const SpinManifold& manifold, double deltaQ, double t);

}  // namespace spincat
