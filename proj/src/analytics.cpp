#include "spincat/analytics.hpp"

#include "spincat/channels.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace spincat {

Operator psd_sqrt(const Operator& a) {
  Eigen::SelfAdjointEigenSolver<Operator> eig(0.5 * (a + a.adjoint()));
  Eigen::VectorXd vals = eig.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i) < -1e-10) throw std::invalid_argument("psd_sqrt: matrix is not PSD");
    vals(i) = std::sqrt(std::max(vals(i), 0.0));
  }
  const Operator& v = eig.eigenvectors();
  return v * vals.cast<cplx>().asDiagonal() * v.adjoint();
}

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw std::invalid_argument("uhlmann_fidelity: dimension mismatch");
  const Operator s = psd_sqrt(rho.matrix());
  const Operator inner = s * sigma.matrix() * s;
  Eigen::SelfAdjointEigenSolver<Operator> eig(0.5 * (inner + inner.adjoint()),
                                              Eigen::EigenvaluesOnly);
  double tr = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double v = eig.eigenvalues()(i);
    if (v < -1e-10) throw std::invalid_argument("uhlmann_fidelity: input is not PSD");
    tr += std::sqrt(std::max(v, 0.0));
  }
  return std::clamp(tr * tr, 0.0, 1.0);
}

double fidelity_pure(const Operator& rho, const StateVector& psi) {
  return psi.dot(rho * psi).real();
}

double f_physical(double chi, double gJ) {
  if (chi < 0.0) throw std::invalid_argument("f_physical: chi must be >= 0");
  return 0.5 * (1.0 + std::exp(-gJ * gJ * chi));
}

double f_encoded(double chi, double gJ) {
  if (chi < 0.0) throw std::invalid_argument("f_encoded: chi must be >= 0");
  const double x = gJ * gJ * chi;
  auto e = [x](double k) { return std::exp(-k * x); };
  // Expanded form of the nested exponential expression, one term per |m-n|.
  return (e(25) + 10 * e(16) + 45 * e(9) + 120 * e(4) + 210 * e(1) + 126) / 512.0;
}

double f_corrected(double chi, double gJ) {
  if (chi < 0.0) throw std::invalid_argument("f_corrected: chi must be >= 0");
  const double x = gJ * gJ * chi;
  auto e = [x](double k) { return std::exp(-k * x); };
  return (-e(25) - 5 * e(16) - 5 * e(9) + 20 * e(4) + 70 * e(1) + 49) / 128.0;
}

double f_corrected_with_delta(double chi, double delta, double gJ) {
  if (chi < 0.0 || delta < 0.0)
    throw std::invalid_argument("f_corrected_with_delta: chi and delta must be >= 0");
  const double x = gJ * gJ * chi;
  const double d = std::exp(-2.0 * delta * delta);
  auto e = [x](double k) { return std::exp(-k * x); };
  const double infidelity = (5 * e(25) + 20 * e(16) + 65 * e(9) - 80 * e(4) - 70 * e(1) + 316 -
                             d * (e(25) + 45 * e(9) + 210 * e(1))) /
                            512.0;
  return 1.0 - infidelity;
}

double control_delta_for_offset(double offset) {
  if (offset < 0.0 || offset >= 0.5)
    throw std::invalid_argument("control_delta_for_offset: offset must be in [0, 0.5)");
  return std::sqrt(-0.5 * std::log(1.0 - 2.0 * offset));
}

std::string to_string(FitKind kind) {
  switch (kind) {
    case FitKind::linear: return "linear";
    case FitKind::quadratic: return "quadratic";
    case FitKind::cubic: return "cubic";
  }
  return "unknown";
}

double ErrorFit::predict(double chi) const {
  return coefficient * std::pow(chi, static_cast<int>(kind)) + offset;
}

ErrorFit fit_error_curve(const std::vector<ErrorPoint>& points, FitKind kind) {
  if (points.size() < 3) throw std::invalid_argument("fit_error_curve: need >= 3 points");
  const int power = static_cast<int>(kind);
  Eigen::Matrix2d normal = Eigen::Matrix2d::Zero();
  Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
  for (const auto& p : points) {
    if (!(p.sigma > 0.0)) throw std::invalid_argument("fit_error_curve: sigma must be > 0");
    const double w = 1.0 / (p.sigma * p.sigma);
    const Eigen::Vector2d row(std::pow(p.chi, power), 1.0);
    normal += w * row * row.transpose();
    rhs += w * row * p.error;
  }
  // Scale-invariant conditioning check on the correlation form.
  const double corr = normal(0, 1) / std::sqrt(normal(0, 0) * normal(1, 1));
  if (!(normal(0, 0) > 0.0) || 1.0 - std::abs(corr) < 1e-12)
    throw std::invalid_argument("fit_error_curve: degenerate design matrix");
  ErrorFit fit;
  fit.kind = kind;
  fit.covariance = normal.inverse();
  const Eigen::Vector2d beta = fit.covariance * rhs;
  fit.coefficient = beta(0);
  fit.offset = beta(1);
  fit.points = points;
  for (const auto& p : points) {
    const double r = (p.error - fit.predict(p.chi)) / p.sigma;
    fit.chi_squared += r * r;
  }
  return fit;
}

Lifetime useful_lifetime(FitKind kind, double coefficient, double offset, double epsilon,
                         double sigmaB) {
  Lifetime out;
  if (!(sigmaB > 0.0)) throw std::invalid_argument("useful_lifetime: sigmaB must be > 0");
  if (epsilon < offset || coefficient <= 0.0) return out;
  out.reachable = true;
  out.chi = std::pow((epsilon - offset) / coefficient, 1.0 / static_cast<int>(kind));
  out.seconds = std::sqrt(2.0 * out.chi) / (kMuBOverHbar * sigmaB);
  return out;
}

Lifetime useful_lifetime(const ErrorFit& fit, double epsilon, double sigmaB) {
  return useful_lifetime(fit.kind, fit.coefficient, fit.offset, epsilon, sigmaB);
}

namespace {

struct ParameterSampler {
  Eigen::Vector2d mean;
  Eigen::Matrix2d root;

  explicit ParameterSampler(const ErrorFit& fit) : mean(fit.coefficient, fit.offset) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(fit.covariance);
    Eigen::Vector2d vals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    root = eig.eigenvectors() * vals.asDiagonal();
  }

  Eigen::Vector2d draw(Rng& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double z0 = normal(rng);
    const double z1 = normal(rng);
    return mean + root * Eigen::Vector2d(z0, z1);
  }
};

}  // namespace

std::vector<LifetimeResult> lambda_ratio(const ErrorFit& logical, const ErrorFit& physical,
                                         const std::vector<double>& epsilonGrid,
                                         double sigmaB, int resamples, Rng& rng) {
  if (resamples < 0) throw std::invalid_argument("lambda_ratio: resamples must be >= 0");
  const ParameterSampler sl(logical);
  const ParameterSampler sp(physical);
  std::vector<Eigen::Vector2d> draws_l, draws_p;
  for (int i = 0; i < resamples; ++i) {
    draws_l.push_back(sl.draw(rng));
    draws_p.push_back(sp.draw(rng));
  }
  std::vector<LifetimeResult> out;
  for (double eps : epsilonGrid) {
    LifetimeResult r;
    r.epsilon = eps;
    const Lifetime tl = useful_lifetime(logical, eps, sigmaB);
    const Lifetime tp = useful_lifetime(physical, eps, sigmaB);
    r.reachable = tl.reachable && tp.reachable && tp.seconds > 0.0;
    if (r.reachable) {
      r.tau_logical = tl.seconds;
      r.tau_physical = tp.seconds;
      r.lambda = tl.seconds / tp.seconds;
      for (int i = 0; i < resamples; ++i) {
        const Lifetime a =
            useful_lifetime(logical.kind, draws_l[i](0), draws_l[i](1), eps, sigmaB);
        const Lifetime b =
            useful_lifetime(physical.kind, draws_p[i](0), draws_p[i](1), eps, sigmaB);
        if (a.reachable && b.reachable && b.seconds > 0.0)
          r.band.push_back(a.seconds / b.seconds);
      }
      r.lambda_lo = r.lambda_hi = r.lambda;
      for (double v : r.band) {
        r.lambda_lo = std::min(r.lambda_lo, v);
        r.lambda_hi = std::max(r.lambda_hi, v);
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

double SinusoidFit::period() const { return 2.0 * kPi / omega; }

double SinusoidFit::period_sigma() const { return 2.0 * kPi * omega_sigma / (omega * omega); }

double SinusoidFit::argmin() const {
  // cos(omega x - phase) = -sign(amplitude)
  double x = (phase + (amplitude >= 0.0 ? kPi : 0.0)) / omega;
  const double p = period();
  x = std::fmod(x, p);
  if (x < 0.0) x += p;
  return x;
}

namespace {

struct LinearSinusoid {
  double a = 0.0, b = 0.0, c = 0.0;  // a cos + b sin + c
  double chi_squared = 0.0;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
};

LinearSinusoid fit_at_omega(double omega, const std::vector<double>& x,
                            const std::vector<double>& y, const std::vector<double>& s) {
  Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / (s[i] * s[i]);
    const Eigen::Vector3d row(std::cos(omega * x[i]), std::sin(omega * x[i]), 1.0);
    normal += w * row * row.transpose();
    rhs += w * row * y[i];
  }
  LinearSinusoid f;
  f.covariance = normal.inverse();
  const Eigen::Vector3d beta = f.covariance * rhs;
  f.a = beta(0);
  f.b = beta(1);
  f.c = beta(2);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r =
        (y[i] - (f.a * std::cos(omega * x[i]) + f.b * std::sin(omega * x[i]) + f.c)) / s[i];
    f.chi_squared += r * r;
  }
  return f;
}

}  // namespace

SinusoidFit fit_sinusoid(const std::vector<double>& x, const std::vector<double>& y,
                         const std::vector<double>& sigma) {
  if (x.size() != y.size() || x.size() != sigma.size() || x.size() < 5)
    throw std::invalid_argument("fit_sinusoid: need >= 5 consistent points");
  for (double s : sigma)
    if (!(s > 0.0)) throw std::invalid_argument("fit_sinusoid: sigma must be > 0");

  // Profile chi^2 over omega (the model is linear in the other parameters),
  // then refine the minimum by golden-section search.
  auto profile = [&](double w) { return fit_at_omega(w, x, y, sigma).chi_squared; };
  double best_w = 1.0;
  double best = profile(1.0);
  for (double w = 0.5; w <= 1.5 + 1e-12; w += 0.005) {
    const double v = profile(w);
    if (v < best) {
      best = v;
      best_w = w;
    }
  }
  double lo = best_w - 0.005, hi = best_w + 0.005;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double m1 = hi - gr * (hi - lo);
    const double m2 = lo + gr * (hi - lo);
    if (profile(m1) < profile(m2)) hi = m2; else lo = m1;
  }
  const double omega = 0.5 * (lo + hi);
  const LinearSinusoid lf = fit_at_omega(omega, x, y, sigma);

  SinusoidFit fit;
  fit.omega = omega;
  fit.mean = lf.c;
  fit.amplitude = std::hypot(lf.a, lf.b);
  fit.phase = std::atan2(lf.b, lf.a);
  fit.chi_squared = lf.chi_squared;
  // Amplitude error by linear propagation through hypot(a, b).
  if (fit.amplitude > 0.0) {
    const Eigen::Vector2d grad(lf.a / fit.amplitude, lf.b / fit.amplitude);
    fit.amplitude_sigma =
        std::sqrt(std::max(0.0, (grad.transpose() * lf.covariance.topLeftCorner<2, 2>() *
                                 grad)(0, 0)));
  }
  // Omega error from the profile curvature: delta chi^2 = 1.
  const double h = 1e-4;
  const double curvature = (profile(omega + h) - 2.0 * profile(omega) + profile(omega - h)) /
                           (h * h);
  fit.omega_sigma = curvature > 0.0 ? std::sqrt(2.0 / curvature) : 0.0;
  return fit;
}

}  // namespace spincat
