#include "oracles.hpp"
#include "spincat/analytics.hpp"
#include "spincat/channels.hpp"
#include "spincat/code.hpp"
#include "spincat/correction.hpp"
#include "spincat/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace spincat;

namespace {

const SpinManifold kD = SpinManifold::d52();

// (|-5/2> - i|+5/2>)/sqrt(2) in SpinManifold order.
StateVector decoded_cat() {
  StateVector v = StateVector::Zero(6);
  v(5) = 1.0 / std::sqrt(2.0);
  v(0) = cplx(0.0, -1.0 / std::sqrt(2.0));
  return v;
}

StateVector first_order_error(const StateVector& psi) {
  return (oracle::spin(5).jx * psi).normalized();
}

// Second-order component: Jx^2 psi restricted to m = +-1/2.
StateVector second_order_error(const StateVector& psi) {
  StateVector v = oracle::spin(5).jx * (oracle::spin(5).jx * psi);
  for (int i : {0, 1, 4, 5}) v(i) = 0.0;
  return v.normalized();
}

double d_fidelity(const CompositeState& s, const StateVector& psi) {
  return fidelity_pure(d_block(reduce_internal(s)), psi);
}

}  // namespace

TEST(Pulses, Unitary) {
  const CompositeSpace sp(1, 4);
  EXPECT_TRUE(is_unitary(carrier_pi(sp, IonLevel::D_m32, IonLevel::S_m12, 0.7)));
  for (auto model : {PulseModel::ideal, PulseModel::calibrated})
    EXPECT_TRUE(is_unitary(blue_sideband_pi(sp, IonLevel::S_p12, IonLevel::D_p52, -0.3, model)));
  CorrectionConfig cfg;
  cfg.phi_c = 1.1;
  EXPECT_TRUE(is_unitary(correction_unitary(sp, cfg)));
  EXPECT_TRUE(is_unitary(second_order_correction_unitary(CompositeSpace(2, 3), cfg)));
  EXPECT_THROW(second_order_correction_unitary(sp, cfg), std::invalid_argument);
  EXPECT_THROW(blue_sideband_pi(sp, IonLevel::D_m32, IonLevel::D_m52, 0.0, PulseModel::ideal),
               std::invalid_argument);
  EXPECT_THROW(carrier_pi(sp, IonLevel::S_m12, IonLevel::S_m12, 0.0), std::invalid_argument);
}

TEST(Pulses, CalibratedSidebandTransfer) {
  const int cutoff = 5;
  const CompositeSpace sp(1, cutoff);
  const Operator u =
      blue_sideband_pi(sp, IonLevel::S_m12, IonLevel::D_m52, 0.0, PulseModel::calibrated);
  const Operator ideal =
      blue_sideband_pi(sp, IonLevel::S_m12, IonLevel::D_m52, 0.0, PulseModel::ideal);
  for (int n = 0; n + 1 < cutoff; ++n) {
    const int from = sp.index(IonLevel::S_m12, n);
    const int to = sp.index(IonLevel::D_m52, n + 1);
    const double expected = std::pow(std::sin(0.5 * kPi * std::sqrt(n + 1.0)), 2);
    EXPECT_NEAR(std::norm(u(to, from)), expected, 1e-14) << n;
    EXPECT_NEAR(std::norm(ideal(to, from)), 1.0, 1e-14) << n;
  }
}

TEST(Correction, FirstOrderErrorRestored) {
  const StateVector psi = decoded_cat();
  const StateVector e1 = first_order_error(psi);
  EXPECT_NEAR(std::norm(e1(1)) + std::norm(e1(4)), 1.0, 1e-14);  // +-3/2 only
  CorrectionConfig cfg;
  cfg.model = PulseModel::ideal;
  for (const StateVector& in : {psi, e1}) {
    const CompositeState s = lift(DensityMatrix::from_pure(in), 0, 3);
    const CorrectionResult r = apply_correction(s, cfg);
    EXPECT_NEAR(r.report.p_erase, 0.0, 1e-14);
    EXPECT_GT(d_fidelity(r.state, psi), 1.0 - 1e-10);
  }
  // Unaffected input passes through the pulses unchanged.
  const CompositeState s = lift(DensityMatrix::from_pure(psi), 0, 3);
  EXPECT_LT(max_abs(apply_correction(s, cfg).state.rho - s.rho), 1e-12);
}

TEST(Correction, SuperpositionFactorizes) {
  // psi and E1 end in different Fock states carrying the same internal state,
  // so a coherent superposition of the two leaves a product state.
  const StateVector psi = decoded_cat();
  const StateVector e1 = first_order_error(psi);
  CorrectionConfig cfg;
  cfg.model = PulseModel::ideal;
  const StateVector in = std::sqrt(0.7) * psi + std::sqrt(0.3) * e1;
  const CorrectionResult r = apply_correction(lift(DensityMatrix::from_pure(in), 0, 3), cfg);
  EXPECT_GT(d_fidelity(r.state, psi), 1.0 - 1e-10);
  EXPECT_NEAR(r.report.p0, 0.7, 1e-12);
  EXPECT_NEAR(r.report.p1, 0.3, 1e-12);
  EXPECT_LT(product_deviation(r.state), 1e-9);
}

TEST(Correction, PhaseDependence) {
  const StateVector psi = decoded_cat();
  const StateVector e1 = first_order_error(psi);
  const double p0 = 0.6, p1 = 0.4;
  const DensityMatrix mix =
      DensityMatrix::from_matrix(p0 * psi * psi.adjoint() + p1 * e1 * e1.adjoint());
  for (double phi : {0.0, 0.5, 1.7, kPi, 4.0}) {
    CorrectionConfig cfg;
    cfg.model = PulseModel::ideal;
    cfg.phi_c = phi;
    const CorrectionResult r = apply_correction(lift(mix, 0, 3), cfg);
    EXPECT_NEAR(d_fidelity(r.state, psi), p0 + p1 * 0.5 * (1.0 + std::cos(phi)), 1e-12) << phi;
  }
}

TEST(Correction, DephasedCatMatchesClosedForm) {
  const CodewordPair c = spin_cat_codewords(kD);
  const double r = 1.0 / std::sqrt(2.0);
  const StateVector logical = prepare_logical({cplx(r, 0), cplx(0, -r)}, c);
  const StateVector psi = canonical_phase(decode_unitary(kD) * logical);
  for (double sigma : {0.05, 0.3, 0.6}) {
    const DensityMatrix noisy = dephase(DensityMatrix::from_pure(logical), kD, sigma);
    const Operator dec = decode_unitary(kD);
    const DensityMatrix decoded = DensityMatrix::from_matrix(dec * noisy.matrix() * dec.adjoint());
    CorrectionConfig cfg;
    cfg.model = PulseModel::ideal;
    const CorrectionResult res = apply_correction(lift(decoded, 0, 3), cfg);
    const double chi = sigma * sigma / (2.0 * 1.2 * 1.2);
    EXPECT_NEAR(d_fidelity(res.state, psi), f_corrected(chi, 1.2), 1e-9) << sigma;
  }
}

TEST(Correction, SecondOrderErrorRestored) {
  const StateVector psi = decoded_cat();
  const StateVector e2 = second_order_error(psi);
  EXPECT_NEAR(std::norm(e2(2)) + std::norm(e2(3)), 1.0, 1e-14);
  CorrectionConfig cfg;
  cfg.model = PulseModel::ideal;
  const CompositeSpace sp(2, 3);
  const CompositeState in{sp, lift_pure(e2, sp, 0, 0) * lift_pure(e2, sp, 0, 0).adjoint()};
  const CorrectionResult r = correct_second_order(in, cfg);
  EXPECT_NEAR(r.report.p_erase, 0.0, 1e-14);
  EXPECT_GT(d_fidelity(r.state, psi), 1.0 - 1e-10);
  const StateVector target = lift_pure(psi, sp, 0, 1);
  EXPECT_NEAR(std::norm(target.dot(r.state.rho * target)), 1.0, 1e-10);
}

TEST(Correction, TruncationGuard) {
  CorrectionConfig cfg;
  const CompositeState top = lift(DensityMatrix::from_pure(decoded_cat()), 2, 3);
  EXPECT_THROW(apply_correction(top, cfg), NumericalGuardError);
  const CompositeState ok = lift(DensityMatrix::from_pure(decoded_cat()), 1, 3);
  EXPECT_NO_THROW(apply_correction(ok, cfg));
  EXPECT_THROW(lift(DensityMatrix::from_pure(decoded_cat()), 3, 3), std::out_of_range);
}

TEST(Heating, SingleJumpTransfer) {
  const CompositeState s = lift(DensityMatrix::from_pure(decoded_cat()), 0, 4);
  const double rate = 8.8, t = 5e-3;
  const CompositeState h = heat(s, rate, t);
  const Operator mot = reduce_motion(h);
  const double p = 1.0 - std::exp(-rate * t);
  EXPECT_NEAR(mot(0, 0).real(), 1.0 - p, 1e-14);
  EXPECT_NEAR(mot(1, 1).real(), p, 1e-14);
  EXPECT_LT(max_abs(reduce_internal(h) - reduce_internal(s)), 1e-14);
  EXPECT_THROW(heat(s, 200.0, 5e-3), NumericalGuardError);
  EXPECT_THROW(heat(s, -1.0, 1e-3), std::invalid_argument);
}

TEST(Heating, HeatedTrialIsMiscorrected) {
  // With one extra quantum the calibrated sideband only partly transfers,
  // leaving S population that is flagged as erasure.
  const StateVector e1 = first_order_error(decoded_cat());
  CorrectionConfig cfg;
  const CompositeState s = lift(DensityMatrix::from_pure(e1), 1, 4);
  const CorrectionResult r = apply_correction(s, cfg);
  const double expected = std::pow(std::cos(0.5 * kPi * std::sqrt(2.0)), 2);
  EXPECT_NEAR(r.report.p_erase, expected, 1e-12);
  const ErasureResult er = detect_erasure(r.state);
  EXPECT_NEAR(er.p_erase, expected, 1e-12);
  ASSERT_TRUE(er.post_selected.has_value());
  EXPECT_NEAR(er.post_selected->rho.trace().real(), 1.0, 1e-12);
  EXPECT_NO_THROW(er.post_selected->validate());
}

TEST(Erasure, AllErased) {
  StateVector s = StateVector::Zero(kIonLevels);
  s(static_cast<int>(IonLevel::S_p12)) = 1.0;
  const ErasureResult er = detect_erasure(lift(DensityMatrix::from_pure(s), 0, 3));
  EXPECT_TRUE(er.all_erased);
  EXPECT_FALSE(er.post_selected.has_value());
  EXPECT_NEAR(er.p_erase, 1.0, 1e-15);
}

TEST(Motion, Populations) {
  const auto th = thermal_populations(0.1, 6);
  double total = 0.0;
  for (double p : th) total += p;
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_NEAR(th[1] / th[0], 0.1 / 1.1, 1e-14);
  EXPECT_EQ(thermal_populations(0.0, 3)[0], 1.0);
  EXPECT_THROW(thermal_populations(-0.1, 3), std::invalid_argument);
  EXPECT_THROW(fock_populations(3, 3), std::out_of_range);
}

TEST(Levels, Labels) {
  EXPECT_EQ(level_of_d_index(0), IonLevel::D_p52);
  EXPECT_EQ(level_of_d_index(5), IonLevel::D_m52);
  EXPECT_EQ(d_level(-3), IonLevel::D_m32);
  EXPECT_EQ(s_level(1), IonLevel::S_p12);
  EXPECT_TRUE(is_ground(IonLevel::S_m12));
  EXPECT_FALSE(is_ground(IonLevel::D_p12));
  const CompositeSpace sp(2, 3);
  EXPECT_EQ(sp.dim(), 72);
  EXPECT_EQ(sp.index(IonLevel::D_m52, 1, 2), static_cast<int>(IonLevel::D_m52) * 9 + 5);
  EXPECT_EQ(sp.fock(5, 0), 1);
  EXPECT_EQ(sp.fock(5, 1), 2);
}
