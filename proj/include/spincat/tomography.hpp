#pragma once

#include "spincat/rng.hpp"
#include "spincat/state.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace spincat {

/// Readout frame U = R_y(theta_y) R_x(theta_x); the x rotation acts first.
struct MeasurementSetting {
  double theta_x = 0.0;
  double theta_y = 0.0;
};

/// All combinations of {0, pi/4, pi/2} for both angles (9 settings).
std::vector<MeasurementSetting> standard_settings();

/// Orthonormal readout basis for one setting: column k is frame * U |k>,
/// so P_k = basis.col(k) basis.col(k)^dagger.
struct ProjectorGroup {
  MeasurementSetting setting;
  Operator basis;

  Operator projector(int k) const;
};

/// `frame` is an extra unitary applied after U (identity by default).
std::vector<ProjectorGroup> projector_set(const std::vector<MeasurementSetting>& settings,
                                          const SpinManifold& manifold,
                                          const Operator& frame = Operator());

/// Rank of the linear map rho -> (Tr P_i rho)_i over all projectors.
int measurement_map_rank(const std::vector<ProjectorGroup>& groups, double tol = 1e-9);

/// Counts per outcome, in SpinManifold basis order. Stored as doubles so the
/// infinite-shot limit (counts = shots * p) uses the same type; sampled
/// counts are integral.
struct MeasurementRecord {
  MeasurementSetting setting;
  std::vector<double> counts;
  double shots = 0.0;

  void validate() const;
};

/// Born probabilities Tr(P_k rho) for one group, optionally mixed with
/// a uniform confusion at readoutError. Throws NumericalGuardError if they
/// do not sum to 1 within 1e-9.
std::vector<double> outcome_probabilities(const DensityMatrix& rho, const ProjectorGroup& group,
                                          double readoutError = 0.0);

std::vector<MeasurementRecord> simulate_measurements(const DensityMatrix& rho,
                                                     const std::vector<ProjectorGroup>& groups,
                                                     int shotsPerSetting, Rng& rng,
                                                     double readoutError = 0.0);

/// Records with counts = shots * p (no sampling noise).
std::vector<MeasurementRecord> expected_measurements(const DensityMatrix& rho,
                                                     const std::vector<ProjectorGroup>& groups,
                                                     int shotsPerSetting,
                                                     double readoutError = 0.0);

struct MLEOptions {
  int max_iterations = 10000;
  double tolerance = 1e-10;   ///< absolute log-likelihood gain
  double probability_floor = 1e-12;
};

struct MLEResult {
  DensityMatrix rho_est = DensityMatrix::maximally_mixed(1);
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  bool floored = false;          ///< some nonzero count met a floored probability
  bool rank_deficient = false;   ///< map rank below d^2 - 1
  std::vector<double> trace;     ///< log-likelihood after each accepted step
};

/// Diluted R rho R iteration starting from I/d.
MLEResult mle_reconstruct(const std::vector<MeasurementRecord>& records,
                          const std::vector<ProjectorGroup>& groups,
                          const MLEOptions& options = {});
/// Builds the projector groups from the record settings.
MLEResult mle_reconstruct(const std::vector<MeasurementRecord>& records,
                          const SpinManifold& manifold = SpinManifold::d52(),
                          const MLEOptions& options = {});

enum class BootstrapMode { multinomial, exact };

struct BootstrapResult {
  double fidelity = 0.0;
  double sigma = 0.0;
  std::vector<double> samples;
};

/// Parametric bootstrap: resample records from rhoEst, refit, and take the
/// standard deviation of the refitted fidelities against rhoIdeal. Resample
/// b draws from Rng::stream(seed, 0, b).
BootstrapResult bootstrap_fidelity(const DensityMatrix& rhoEst, const DensityMatrix& rhoIdeal,
                                   const std::vector<ProjectorGroup>& groups, int shots,
                                   int resamples, std::uint64_t seed, unsigned workers = 1,
                                   BootstrapMode mode = BootstrapMode::multinomial);

// One JSON object per line: {"thetaX":..,"thetaY":..,"counts":[..],"shots":..}
void write_records(std::ostream& out, const std::vector<MeasurementRecord>& records);
std::vector<MeasurementRecord> read_records(std::istream& in);
/// rho as a d x d array of [re, im] pairs plus the scalar fields.
std::string mle_result_json(const MLEResult& result);

}  // namespace spincat
