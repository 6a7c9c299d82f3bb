#pragma once

#include "spincat/correction.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spincat {

enum class ExperimentKind {
  fig3_sweep,
  phase_sweep,
  breakeven,
  erasure_scan,
  kl_report,
  tomo_calibration,
};

std::string_view to_string(ExperimentKind kind);
/// Throws ConfigError for unknown names.
ExperimentKind experiment_from_string(std::string_view name);

enum class FidelityPath { oracle, realistic };

struct ManifoldConfig {
  int two_j = 5;
  double g_j = 1.2;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::fig3_sweep;
  std::uint64_t seed = 0;
  int trials = 10000;
  unsigned workers = 1;

  ManifoldConfig logical{5, 1.2};
  ManifoldConfig physical{1, 2.0};

  // noise
  std::vector<double> sigma_over_gj;  ///< Fig. 3 axis sigma_phi / g_J
  double sigma_b = 0.78e-9;           ///< tesla
  std::vector<double> delays;         ///< seconds

  // correction
  bool correction = true;
  int order = 1;
  PulseModel pulse_model = PulseModel::calibrated;
  double phi_c = 0.0;
  double heating_rate = 0.0;          ///< quanta per second
  double residual_excitation = 0.0;   ///< probability of starting in |1>
  int fock_cutoff = 4;
  double quadrupole_hz = 0.0;
  bool quadrupole_compensated = true;

  // constant error contributions, injected as depolarization
  double offset_physical = 0.0;
  double offset_uncorrected = 0.0;
  double offset_corrected = 0.0;
  double delta = 0.0;  ///< control dephasing width on the decoded +-J coherence

  // fidelity evaluation
  FidelityPath path = FidelityPath::oracle;
  int shots = 200;
  double readout_error = 0.0;
  int bootstrap = 100;

  // fits
  std::vector<double> epsilon;
  int resamples = 100;

  // phase sweep
  int phase_points = 12;
  double phase_sigma_over_gj = 0.3;

  // tomography calibration
  int tomo_seeds = 100;
  std::vector<int> scaling_shots{200, 800};

  int kl_max_order = 2;

  /// Throws ConfigError describing the first violated rule.
  void validate() const;
};

/// Command-line values applied on top of the file before validation.
struct ConfigOverrides {
  std::optional<ExperimentKind> experiment;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<unsigned> workers;
};

/// Parses TOML text. Unknown keys, wrong types, a missing seed and rule
/// violations all raise ConfigError. An experiment override must agree with
/// the file's `experiment` key when both are present.
ExperimentConfig parse_config(std::string_view toml, const ConfigOverrides& overrides = {});
ExperimentConfig load_config(const std::filesystem::path& path,
                             const ConfigOverrides& overrides = {});

/// Canonical echo of every field; the hash is taken over its dump().
nlohmann::json config_to_json(const ExperimentConfig& cfg);
/// FNV-1a 64 of the canonical JSON echo.
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace spincat
