#pragma once

#include "spincat/rng.hpp"
#include "spincat/state.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spincat {

/// F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
/// <psi|rho|psi> for a normalized pure reference state.
double fidelity_pure(const Operator& rho, const StateVector& psi);

/// Hermitian square root with eigenvalues in [-1e-10, 0) clamped to 0.
Operator psd_sqrt(const Operator& a);

// Closed-form fidelities under Gaussian dephasing with parameter chi.
double f_physical(double chi, double gJ = 2.0);
double f_encoded(double chi, double gJ = 6.0 / 5.0);
double f_corrected(double chi, double gJ = 6.0 / 5.0);
/// Corrected fidelity with an extra control dephasing of width delta acting
/// on the +-5/2 coherence of the decoded state.
double f_corrected_with_delta(double chi, double delta, double gJ = 6.0 / 5.0);
/// delta whose chi-independent error equals `offset`: (1 - e^{-2 delta^2})/2.
double control_delta_for_offset(double offset);

struct ErrorPoint {
  double t = 0.0;
  double chi = 0.0;
  double error = 0.0;
  double sigma = 0.0;
};

enum class FitKind { linear = 1, quadratic = 2, cubic = 3 };
std::string to_string(FitKind kind);

/// eps = coefficient * chi^p + offset, p = 1, 2 or 3.
struct ErrorFit {
  FitKind kind = FitKind::linear;
  double coefficient = 0.0;
  double offset = 0.0;
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();  ///< (coefficient, offset)
  double chi_squared = 0.0;
  std::vector<ErrorPoint> points;

  double predict(double chi) const;
  double coefficient_sigma() const { return std::sqrt(covariance(0, 0)); }
  double offset_sigma() const { return std::sqrt(covariance(1, 1)); }
  /// chi^2 + 2 * (number of parameters).
  double aic() const { return chi_squared + 4.0; }
};

/// Weighted least squares. Requires >= 3 points with positive sigma.
ErrorFit fit_error_curve(const std::vector<ErrorPoint>& points, FitKind kind);

struct Lifetime {
  bool reachable = false;
  double chi = 0.0;
  double seconds = 0.0;
};

/// Inverts the fitted curve at eps and maps chi to t = sqrt(2 chi)/(mu_B sigma_B/hbar).
Lifetime useful_lifetime(const ErrorFit& fit, double epsilon, double sigmaB);
Lifetime useful_lifetime(FitKind kind, double coefficient, double offset, double epsilon,
                         double sigmaB);

struct LifetimeResult {
  double epsilon = 0.0;
  bool reachable = false;
  double tau_physical = 0.0;
  double tau_logical = 0.0;
  double lambda = 0.0;
  std::vector<double> band;  ///< lambda for each parameter draw
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
};

/// Lambda(eps) = tau_L / tau_P with a band from `resamples` draws of both
/// fits' parameters from their covariance matrices.
std::vector<LifetimeResult> lambda_ratio(const ErrorFit& logical, const ErrorFit& physical,
                                         const std::vector<double>& epsilonGrid,
                                         double sigmaB, int resamples, Rng& rng);

/// y = amplitude * cos(omega x - phase) + mean, omega free.
struct SinusoidFit {
  double amplitude = 0.0;
  double amplitude_sigma = 0.0;
  double phase = 0.0;
  double mean = 0.0;
  double omega = 1.0;
  double omega_sigma = 0.0;
  double chi_squared = 0.0;

  double period() const;
  double period_sigma() const;
  double minimum() const { return mean - std::abs(amplitude); }
  /// x in [0, 2 pi / omega) where the curve is minimal.
  double argmin() const;
};

SinusoidFit fit_sinusoid(const std::vector<double>& x, const std::vector<double>& y,
                         const std::vector<double>& sigma);

}  // namespace spincat
