#pragma once

#include "spincat/spinops.hpp"
#include "spincat/state.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace spincat {

/// Internal levels of the ion: the S1/2 ground doublet and the D5/2 manifold.
enum class IonLevel : int {
  S_m12 = 0,
  S_p12,
  D_m52,
  D_m32,
  D_m12,
  D_p12,
  D_p32,
  D_p52,
};
inline constexpr int kIonLevels = 8;

std::string_view level_label(IonLevel level);
bool is_ground(IonLevel level);
/// D5/2 level with label m = twoM / 2.
IonLevel d_level(int twoM);
/// S1/2 level with label m = twoM / 2.
IonLevel s_level(int twoM);
/// Ion level holding basis index i of the D5/2 SpinManifold (descending m).
IonLevel level_of_d_index(int index);

enum class PulseModel { ideal, calibrated };

/// Ion levels tensored with one or two truncated oscillator modes.
/// Composite index = level * cutoff^modes + n1 * cutoff^(modes-1) + n2.
class CompositeSpace {
 public:
  CompositeSpace(int modes = 1, int cutoff = 3);

  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  int motional_dim() const { return motional_dim_; }
  int dim() const { return kIonLevels * motional_dim_; }
  int index(IonLevel level, int n1, int n2 = 0) const;
  /// Fock number of `mode` for motional sub-index k.
  int fock(int k, int mode) const;

  bool operator==(const CompositeSpace& o) const {
    return modes_ == o.modes_ && cutoff_ == o.cutoff_;
  }

 private:
  int modes_;
  int cutoff_;
  int motional_dim_;
};

struct CompositeState {
  CompositeSpace space;
  Operator rho;

  /// Unit trace and PSD within 1e-10.
  void validate() const;
  /// Largest population found in the top Fock level of any mode.
  double top_fock_population() const;
};

/// Fock populations for one mode.
std::vector<double> fock_populations(int n, int cutoff);
/// Geometric thermal distribution with mean nbar, truncated and renormalized.
std::vector<double> thermal_populations(double nbar, int cutoff);

/// internal (6-level D5/2 or 8-level ion) tensored with diagonal motional
/// populations, one vector per mode.
CompositeState lift(const DensityMatrix& internal,
                    const std::vector<std::vector<double>>& motion, int cutoff);
CompositeState lift(const DensityMatrix& internal, int fockIndex, int cutoff = 3);

/// Pure composite vector |internal> |n1 n2>.
StateVector lift_pure(const StateVector& internal, const CompositeSpace& space,
                      int n1, int n2 = 0);

/// Resonant pi pulse between an upper and a lower internal level; motion
/// is untouched.
Operator carrier_pi(const CompositeSpace& space, IonLevel upper, IonLevel lower,
                    double phase);

/// Blue sideband pi pulse |s>|n> <-> |d>|n+1> on `mode`. The ideal model
/// swaps every pair; the calibrated model uses area pi sqrt(n+1).
Operator blue_sideband_pi(const CompositeSpace& space, IonLevel s, IonLevel d,
                          double phase, PulseModel model, int mode = 0);

struct CorrectionConfig {
  double phi_c = 0.0;
  PulseModel model = PulseModel::calibrated;
  double heating_rate = 0.0;  ///< quanta per second
  int fock_cutoff = 3;

  void validate() const;
};

struct CorrectionReport {
  double p0 = 0.0;       ///< D population with no added quanta
  double p1 = 0.0;       ///< D population with exactly one quantum
  double p_erase = 0.0;  ///< S population
  DensityMatrix rho_internal = DensityMatrix::maximally_mixed(kIonLevels);
};

/// The first-order recovery: carriers D-3/2<->S-1/2 and D+3/2<->S+1/2,
/// then blue sidebands S-1/2->D-5/2 (phase phi_c/2) and S+1/2->D+5/2
/// (phase -phi_c/2) on mode 0.
Operator correction_unitary(const CompositeSpace& space, const CorrectionConfig& cfg);

/// First-order recovery on mode 0 followed by the analogous D+-1/2 routing
/// through mode 1. Requires a two-mode space.
Operator second_order_correction_unitary(const CompositeSpace& space,
                                         const CorrectionConfig& cfg);

struct CorrectionResult {
  CompositeState state;
  CorrectionReport report;
};

/// Throws NumericalGuardError if any mode has population >= 1e-6 in its top
/// Fock level before the pulses.
CorrectionResult apply_correction(const CompositeState& state, const CorrectionConfig& cfg);
CorrectionResult correct_second_order(const CompositeState& state,
                                      const CorrectionConfig& cfg);

struct ErasureResult {
  double p_erase = 0.0;
  /// D-manifold projection, renormalized. Empty when every trial is erased.
  std::optional<CompositeState> post_selected;
  bool all_erased = false;
};

ErasureResult detect_erasure(const CompositeState& state);

/// Single-jump heating: with p = 1 - exp(-rate t) the Fock index of `mode`
/// is raised by one. Requires rate * t <= 0.5 and an empty top Fock level.
CompositeState heat(const CompositeState& state, double rate, double t, int mode = 0);

/// Traces out motion; returns the 8x8 internal density matrix.
Operator reduce_internal(const CompositeState& state);
/// Traces out the internal levels and the other mode.
Operator reduce_motion(const CompositeState& state, int mode = 0);
/// D5/2 block of an 8x8 internal operator in SpinManifold order.
Operator d_block(const Operator& internal8);
/// Embeds a 6-level D5/2 operator or vector into the 8-level ion.
Operator embed_d(const Operator& d6);
StateVector embed_d(const StateVector& d6);
/// max |rho - rho_internal (x) rho_motion| for a single-mode state.
double product_deviation(const CompositeState& state);

}  // namespace spincat
