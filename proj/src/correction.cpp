#include "spincat/correction.hpp"

#include "spincat/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spincat {

namespace {

constexpr double kTruncationGuard = 1e-6;

void check_level(IonLevel level) {
  const int v = static_cast<int>(level);
  if (v < 0 || v >= kIonLevels) throw std::invalid_argument("invalid ion level");
}

// Two-level rotation of angle theta between |lower> and |upper> on the
// composite index pair, written into u.
void set_pair_rotation(Operator& u, int lower, int upper, double theta, double phase) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  u(lower, lower) = c;
  u(upper, upper) = c;
  u(upper, lower) = cplx(0.0, -s) * std::exp(cplx(0.0, phase));
  u(lower, upper) = cplx(0.0, -s) * std::exp(cplx(0.0, -phase));
}

// Motional sub-index with the Fock number of `mode` replaced by n.
int with_fock(const CompositeSpace& space, int k, int mode, int n) {
  int stride = 1;
  for (int m = space.modes() - 1; m > mode; --m) stride *= space.cutoff();
  const int current = space.fock(k, mode);
  return k + (n - current) * stride;
}

void guard_truncation(const CompositeState& state) {
  const double top = state.top_fock_population();
  if (top >= kTruncationGuard)
    throw NumericalGuardError("Fock truncation guard: top-level population " +
                              std::to_string(top));
}

CorrectionReport make_report(const CompositeState& out) {
  CorrectionReport r;
  const auto& sp = out.space;
  for (int level = 0; level < kIonLevels; ++level) {
    for (int k = 0; k < sp.motional_dim(); ++k) {
      const int idx = level * sp.motional_dim() + k;
      const double p = out.rho(idx, idx).real();
      if (is_ground(static_cast<IonLevel>(level))) {
        r.p_erase += p;
        continue;
      }
      int quanta = 0;
      for (int m = 0; m < sp.modes(); ++m) quanta += sp.fock(k, m);
      if (quanta == 0) r.p0 += p;
      if (quanta == 1) r.p1 += p;
    }
  }
  r.rho_internal = DensityMatrix::unchecked(reduce_internal(out));
  return r;
}

}  // namespace

std::string_view level_label(IonLevel level) {
  static constexpr std::array<std::string_view, kIonLevels> labels = {
      "S-1/2", "S+1/2", "D-5/2", "D-3/2", "D-1/2", "D+1/2", "D+3/2", "D+5/2"};
  check_level(level);
  return labels[static_cast<int>(level)];
}

bool is_ground(IonLevel level) {
  return level == IonLevel::S_m12 || level == IonLevel::S_p12;
}

IonLevel d_level(int twoM) {
  if (twoM < -5 || twoM > 5 || twoM % 2 == 0)
    throw std::invalid_argument("d_level: 2m must be odd in [-5, 5]");
  return static_cast<IonLevel>(2 + (twoM + 5) / 2);
}

IonLevel s_level(int twoM) {
  if (twoM == -1) return IonLevel::S_m12;
  if (twoM == 1) return IonLevel::S_p12;
  throw std::invalid_argument("s_level: 2m must be -1 or +1");
}

IonLevel level_of_d_index(int index) {
  if (index < 0 || index > 5) throw std::invalid_argument("level_of_d_index: out of range");
  return static_cast<IonLevel>(7 - index);
}

CompositeSpace::CompositeSpace(int modes, int cutoff) : modes_(modes), cutoff_(cutoff) {
  if (modes < 1 || modes > 2)
    throw std::invalid_argument("CompositeSpace: one or two motional modes supported");
  if (cutoff < 2) throw std::invalid_argument("CompositeSpace: Fock cutoff must be >= 2");
  motional_dim_ = modes == 1 ? cutoff : cutoff * cutoff;
}

int CompositeSpace::index(IonLevel level, int n1, int n2) const {
  check_level(level);
  if (n1 < 0 || n1 >= cutoff_ || n2 < 0 || n2 >= cutoff_ || (modes_ == 1 && n2 != 0))
    throw std::out_of_range("CompositeSpace: Fock index out of range");
  const int k = modes_ == 1 ? n1 : n1 * cutoff_ + n2;
  return static_cast<int>(level) * motional_dim_ + k;
}

int CompositeSpace::fock(int k, int mode) const {
  if (modes_ == 1) return k;
  return mode == 0 ? k / cutoff_ : k % cutoff_;
}

void CompositeState::validate() const {
  if (rho.rows() != space.dim() || rho.cols() != space.dim())
    throw std::invalid_argument("CompositeState: matrix does not match space");
  if (std::abs(rho.trace() - cplx(1.0)) > kStateTol)
    throw NumericalGuardError("CompositeState: trace deviates from 1");
  Eigen::SelfAdjointEigenSolver<Operator> eig(0.5 * (rho + rho.adjoint()),
                                              Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -kStateTol)
    throw NumericalGuardError("CompositeState: matrix is not PSD");
}

double CompositeState::top_fock_population() const {
  double worst = 0.0;
  for (int mode = 0; mode < space.modes(); ++mode) {
    double p = 0.0;
    for (int i = 0; i < space.dim(); ++i)
      if (space.fock(i % space.motional_dim(), mode) == space.cutoff() - 1)
        p += rho(i, i).real();
    worst = std::max(worst, p);
  }
  return worst;
}

std::vector<double> fock_populations(int n, int cutoff) {
  if (n < 0 || n >= cutoff) throw std::out_of_range("fock_populations: n beyond cutoff");
  std::vector<double> p(cutoff, 0.0);
  p[n] = 1.0;
  return p;
}

std::vector<double> thermal_populations(double nbar, int cutoff) {
  if (nbar < 0.0) throw std::invalid_argument("thermal_populations: nbar must be >= 0");
  std::vector<double> p(cutoff);
  const double ratio = nbar / (1.0 + nbar);
  double total = 0.0;
  for (int n = 0; n < cutoff; ++n) {
    p[n] = std::pow(ratio, n) / (1.0 + nbar);
    total += p[n];
  }
  for (double& v : p) v /= total;
  return p;
}

CompositeState lift(const DensityMatrix& internal,
                    const std::vector<std::vector<double>>& motion, int cutoff) {
  const int modes = static_cast<int>(motion.size());
  CompositeSpace space(modes, cutoff);
  Operator ion;
  if (internal.dim() == 6) {
    ion = embed_d(internal.matrix());
  } else if (internal.dim() == kIonLevels) {
    ion = internal.matrix();
  } else {
    throw std::invalid_argument("lift: internal state must be 6- or 8-dimensional");
  }
  if (std::abs(ion.trace() - cplx(1.0)) > kStateTol)
    throw std::invalid_argument("lift: internal trace is not 1");
  Eigen::VectorXd mot = Eigen::VectorXd::Ones(space.motional_dim());
  for (int mode = 0; mode < modes; ++mode) {
    if (static_cast<int>(motion[mode].size()) != cutoff)
      throw std::out_of_range("lift: motional populations exceed the Fock cutoff");
    double total = 0.0;
    for (double p : motion[mode]) total += p;
    if (std::abs(total - 1.0) > kStateTol)
      throw std::invalid_argument("lift: motional populations do not sum to 1");
    for (int k = 0; k < space.motional_dim(); ++k) mot(k) *= motion[mode][space.fock(k, mode)];
  }
  Operator motion_rho = mot.cast<cplx>().asDiagonal();
  return {space, Eigen::kroneckerProduct(ion, motion_rho).eval()};
}

CompositeState lift(const DensityMatrix& internal, int fockIndex, int cutoff) {
  return lift(internal, {fock_populations(fockIndex, cutoff)}, cutoff);
}

StateVector lift_pure(const StateVector& internal, const CompositeSpace& space, int n1,
                      int n2) {
  StateVector ion;
  if (internal.size() == 6) {
    ion = embed_d(internal);
  } else if (internal.size() == kIonLevels) {
    ion = internal;
  } else {
    throw std::invalid_argument("lift_pure: internal state must be 6- or 8-dimensional");
  }
  StateVector out = StateVector::Zero(space.dim());
  for (int level = 0; level < kIonLevels; ++level)
    out(space.index(static_cast<IonLevel>(level), n1, n2)) = ion(level);
  return out;
}

Operator carrier_pi(const CompositeSpace& space, IonLevel upper, IonLevel lower,
                    double phase) {
  check_level(upper);
  check_level(lower);
  if (upper == lower) throw std::invalid_argument("carrier_pi: identical levels");
  Operator u = Operator::Identity(space.dim(), space.dim());
  const int md = space.motional_dim();
  for (int k = 0; k < md; ++k)
    set_pair_rotation(u, static_cast<int>(lower) * md + k, static_cast<int>(upper) * md + k,
                      kPi, phase);
  return u;
}

Operator blue_sideband_pi(const CompositeSpace& space, IonLevel s, IonLevel d,
                          double phase, PulseModel model, int mode) {
  check_level(s);
  check_level(d);
  if (!is_ground(s) || is_ground(d))
    throw std::invalid_argument("blue_sideband_pi: requires an S level and a D level");
  if (mode < 0 || mode >= space.modes())
    throw std::invalid_argument("blue_sideband_pi: mode out of range");
  Operator u = Operator::Identity(space.dim(), space.dim());
  const int md = space.motional_dim();
  for (int k = 0; k < md; ++k) {
    const int n = space.fock(k, mode);
    if (n + 1 >= space.cutoff()) continue;  // truncated: no partner level
    const int lower = static_cast<int>(s) * md + k;
    const int upper = static_cast<int>(d) * md + with_fock(space, k, mode, n + 1);
    const double area = model == PulseModel::ideal ? kPi : kPi * std::sqrt(n + 1.0);
    set_pair_rotation(u, lower, upper, area, phase);
  }
  return u;
}

void CorrectionConfig::validate() const {
  if (heating_rate < 0.0) throw std::invalid_argument("CorrectionConfig: heating rate < 0");
  if (fock_cutoff < 2) throw std::invalid_argument("CorrectionConfig: Fock cutoff < 2");
}

Operator correction_unitary(const CompositeSpace& space, const CorrectionConfig& cfg) {
  cfg.validate();
  const Operator c_minus = carrier_pi(space, IonLevel::D_m32, IonLevel::S_m12, 0.0);
  const Operator c_plus = carrier_pi(space, IonLevel::D_p32, IonLevel::S_p12, 0.0);
  const Operator b_minus = blue_sideband_pi(space, IonLevel::S_m12, IonLevel::D_m52,
                                            0.5 * cfg.phi_c, cfg.model, 0);
  const Operator b_plus = blue_sideband_pi(space, IonLevel::S_p12, IonLevel::D_p52,
                                           -0.5 * cfg.phi_c, cfg.model, 0);
  return b_plus * b_minus * c_plus * c_minus;
}

Operator second_order_correction_unitary(const CompositeSpace& space,
                                         const CorrectionConfig& cfg) {
  if (space.modes() != 2)
    throw std::invalid_argument("second-order correction needs two motional modes");
  const Operator first = correction_unitary(space, cfg);
  const Operator c_minus = carrier_pi(space, IonLevel::D_m12, IonLevel::S_m12, 0.0);
  const Operator c_plus = carrier_pi(space, IonLevel::D_p12, IonLevel::S_p12, 0.0);
  const Operator b_minus = blue_sideband_pi(space, IonLevel::S_m12, IonLevel::D_m52,
                                            0.5 * cfg.phi_c, cfg.model, 1);
  const Operator b_plus = blue_sideband_pi(space, IonLevel::S_p12, IonLevel::D_p52,
                                           -0.5 * cfg.phi_c, cfg.model, 1);
  return b_plus * b_minus * c_plus * c_minus * first;
}

CorrectionResult apply_correction(const CompositeState& state, const CorrectionConfig& cfg) {
  guard_truncation(state);
  const Operator u = correction_unitary(state.space, cfg);
  CompositeState out{state.space, u * state.rho * u.adjoint()};
  return {out, make_report(out)};
}

CorrectionResult correct_second_order(const CompositeState& state,
                                      const CorrectionConfig& cfg) {
  guard_truncation(state);
  const Operator u = second_order_correction_unitary(state.space, cfg);
  CompositeState out{state.space, u * state.rho * u.adjoint()};
  return {out, make_report(out)};
}

ErasureResult detect_erasure(const CompositeState& state) {
  const int md = state.space.motional_dim();
  const int ground_dim = 2 * md;  // S levels occupy the first two blocks
  ErasureResult r;
  for (int i = 0; i < ground_dim; ++i) r.p_erase += state.rho(i, i).real();
  const double kept = 1.0 - r.p_erase;
  if (kept <= 1e-12) {
    r.all_erased = true;
    return r;
  }
  Operator projected = state.rho;
  projected.topRows(ground_dim).setZero();
  projected.leftCols(ground_dim).setZero();
  r.post_selected = CompositeState{state.space, projected / kept};
  return r;
}

CompositeState heat(const CompositeState& state, double rate, double t, int mode) {
  if (rate < 0.0 || t < 0.0) throw std::invalid_argument("heat: rate and t must be >= 0");
  if (rate * t > 0.5)
    throw NumericalGuardError("heat: rate * t exceeds the single-jump regime (0.5)");
  if (mode < 0 || mode >= state.space.modes())
    throw std::invalid_argument("heat: mode out of range");
  const double p = 1.0 - std::exp(-rate * t);
  if (p == 0.0) return state;
  guard_truncation(state);
  const auto& sp = state.space;
  const int md = sp.motional_dim();
  // Raising isometry on `mode`, dropping the (empty) top level.
  Operator raise = Operator::Zero(sp.dim(), sp.dim());
  for (int level = 0; level < kIonLevels; ++level)
    for (int k = 0; k < md; ++k) {
      const int n = sp.fock(k, mode);
      if (n + 1 >= sp.cutoff()) continue;
      raise(level * md + with_fock(sp, k, mode, n + 1), level * md + k) = 1.0;
    }
  return {sp, (1.0 - p) * state.rho + p * raise * state.rho * raise.adjoint()};
}

Operator reduce_internal(const CompositeState& state) {
  const int md = state.space.motional_dim();
  Operator out = Operator::Zero(kIonLevels, kIonLevels);
  for (int a = 0; a < kIonLevels; ++a)
    for (int b = 0; b < kIonLevels; ++b)
      for (int k = 0; k < md; ++k) out(a, b) += state.rho(a * md + k, b * md + k);
  return out;
}

Operator reduce_motion(const CompositeState& state, int mode) {
  const auto& sp = state.space;
  const int md = sp.motional_dim();
  Operator joint = Operator::Zero(md, md);
  for (int level = 0; level < kIonLevels; ++level)
    joint += state.rho.block(level * md, level * md, md, md);
  if (sp.modes() == 1) return joint;
  const int n = sp.cutoff();
  Operator out = Operator::Zero(n, n);
  for (int k = 0; k < md; ++k)
    for (int l = 0; l < md; ++l) {
      if (sp.fock(k, 1 - mode) != sp.fock(l, 1 - mode)) continue;
      out(sp.fock(k, mode), sp.fock(l, mode)) += joint(k, l);
    }
  return out;
}

Operator d_block(const Operator& internal8) {
  Operator out(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      out(i, j) = internal8(static_cast<int>(level_of_d_index(i)),
                            static_cast<int>(level_of_d_index(j)));
  return out;
}

Operator embed_d(const Operator& d6) {
  if (d6.rows() != 6 || d6.cols() != 6) throw std::invalid_argument("embed_d: expected 6x6");
  Operator out = Operator::Zero(kIonLevels, kIonLevels);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      out(static_cast<int>(level_of_d_index(i)), static_cast<int>(level_of_d_index(j))) =
          d6(i, j);
  return out;
}

StateVector embed_d(const StateVector& d6) {
  if (d6.size() != 6) throw std::invalid_argument("embed_d: expected 6 entries");
  StateVector out = StateVector::Zero(kIonLevels);
  for (int i = 0; i < 6; ++i) out(static_cast<int>(level_of_d_index(i))) = d6(i);
  return out;
}

double product_deviation(const CompositeState& state) {
  const auto& sp = state.space;
  const int md = sp.motional_dim();
  Operator joint = Operator::Zero(md, md);
  for (int level = 0; level < kIonLevels; ++level)
    joint += state.rho.block(level * md, level * md, md, md);
  const Operator product = Eigen::kroneckerProduct(reduce_internal(state), joint).eval();
  return max_abs(state.rho - product);
}

}  // namespace spincat
