#pragma once

#include "spincat/harness/config.hpp"
#include "spincat/harness/output.hpp"

namespace spincat {

enum class Series { physical, uncorrected, corrected };
std::string_view to_string(Series s);

/// One Monte Carlo point: the noise and control settings for a series.
struct SeriesSpec {
  Series series = Series::uncorrected;
  double sigma_phi = 0.0;          ///< width of the applied e^{-i phi Jz}, radians
  double delta = 0.0;              ///< control dephasing on the decoded +-J coherence
  double offset = 0.0;             ///< constant error injected by depolarization
  double phi_c = 0.0;
  double heating_probability = 0.0;
  double residual_excitation = 0.0;
  double quadrupole_phase = 0.0;   ///< net 2 pi dQ t left after compensation
};

struct PointStats {
  double error = 0.0;
  double error_sigma = 0.0;
  std::int64_t n_trials = 0;
  std::int64_t n_erasures = 0;
  Operator rho;  ///< trial-averaged internal state (realistic path only)
};

/// Runs cfg.trials pure-state trials for one point. Trial i draws from
/// Rng::stream(cfg.seed, streamId, i).
PointStats simulate_point(const ExperimentConfig& cfg, const SeriesSpec& spec,
                          std::uint64_t streamId);

/// chi = (mu_B sigma_B t / hbar)^2 / 2.
double chi_of_delay(double sigmaB, double t);

/// Exact (density-matrix) corrected fidelity of the decoded logical state:
/// dephase, decode, control dephasing, lift, apply_correction, post-select.
double deterministic_corrected_fidelity(const ExperimentConfig& cfg, double sigmaPhi,
                                        double phiC);

RunRecord run_fig3_sweep(const ExperimentConfig& cfg);
RunRecord run_phase_sweep(const ExperimentConfig& cfg);
RunRecord run_breakeven(const ExperimentConfig& cfg);
RunRecord run_erasure_scan(const ExperimentConfig& cfg);
RunRecord run_kl_report(const ExperimentConfig& cfg);
RunRecord run_tomo_calibration(const ExperimentConfig& cfg);

RunRecord run_experiment(const ExperimentConfig& cfg);

}  // namespace spincat
