#include "spincat/tomography.hpp"

#include "spincat/analytics.hpp"
#include "spincat/errors.hpp"
#include "spincat/parallel.hpp"

#include <json.hpp>

#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>

namespace spincat {

std::vector<MeasurementSetting> standard_settings() {
  const double angles[] = {0.0, kPi / 4.0, kPi / 2.0};
  std::vector<MeasurementSetting> out;
  for (double tx : angles)
    for (double ty : angles) out.push_back({tx, ty});
  return out;
}

Operator ProjectorGroup::projector(int k) const {
  return basis.col(k) * basis.col(k).adjoint();
}

std::vector<ProjectorGroup> projector_set(const std::vector<MeasurementSetting>& settings,
                                          const SpinManifold& manifold,
                                          const Operator& frame) {
  if (settings.empty()) throw std::invalid_argument("projector_set: no settings");
  const int d = manifold.dim();
  if (frame.size() != 0 && (frame.rows() != d || !is_unitary(frame)))
    throw std::invalid_argument("projector_set: frame must be a d x d unitary");
  std::vector<ProjectorGroup> groups;
  for (const auto& s : settings) {
    if (!std::isfinite(s.theta_x) || !std::isfinite(s.theta_y))
      throw std::invalid_argument("projector_set: non-finite angle");
    Operator u = rotation_y(manifold, s.theta_y) * rotation_x(manifold, s.theta_x);
    if (frame.size() != 0) u = frame * u;
    groups.push_back({s, u});
  }
  return groups;
}

int measurement_map_rank(const std::vector<ProjectorGroup>& groups, double tol) {
  if (groups.empty()) return 0;
  const Eigen::Index d = groups.front().basis.rows();
  Operator map(static_cast<Eigen::Index>(groups.size()) * d, d * d);
  Eigen::Index row = 0;
  for (const auto& g : groups) {
    for (Eigen::Index k = 0; k < d; ++k, ++row) {
      const Operator p = g.projector(static_cast<int>(k));
      map.row(row) = Eigen::Map<const Eigen::RowVectorXcd>(p.data(), d * d).conjugate();
    }
  }
  Eigen::JacobiSVD<Operator> svd(map);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++rank;
  return rank;
}

void MeasurementRecord::validate() const {
  double total = 0.0;
  for (double c : counts) {
    if (!(c >= 0.0)) throw std::invalid_argument("MeasurementRecord: negative count");
    total += c;
  }
  if (std::abs(total - shots) > 1e-9 * std::max(1.0, shots))
    throw std::invalid_argument("MeasurementRecord: counts do not sum to shots");
}

std::vector<double> outcome_probabilities(const DensityMatrix& rho, const ProjectorGroup& group,
                                          double readoutError) {
  if (rho.dim() != group.basis.rows())
    throw std::invalid_argument("outcome_probabilities: dimension mismatch");
  if (readoutError < 0.0 || readoutError > 1.0)
    throw std::invalid_argument("outcome_probabilities: readout error must be in [0, 1]");
  const int d = rho.dim();
  std::vector<double> p(d);
  double total = 0.0;
  for (int k = 0; k < d; ++k) {
    const auto v = group.basis.col(k);
    p[k] = std::max(0.0, v.dot(rho.matrix() * v).real());
    total += p[k];
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw NumericalGuardError("outcome probabilities sum to " + std::to_string(total));
  for (auto& x : p) x = (1.0 - readoutError) * x + readoutError / d;
  return p;
}

namespace {

std::vector<double> multinomial(int shots, const std::vector<double>& p, Rng& rng) {
  std::vector<double> counts(p.size(), 0.0);
  int remaining = shots;
  double mass = 1.0;
  for (std::size_t k = 0; k + 1 < p.size() && remaining > 0; ++k) {
    const double q = mass > 0.0 ? std::clamp(p[k] / mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<int> draw(remaining, q);
    const int n = draw(rng);
    counts[k] = n;
    remaining -= n;
    mass -= p[k];
  }
  counts.back() += remaining;
  return counts;
}

}  // namespace

std::vector<MeasurementRecord> simulate_measurements(const DensityMatrix& rho,
                                                     const std::vector<ProjectorGroup>& groups,
                                                     int shotsPerSetting, Rng& rng,
                                                     double readoutError) {
  if (shotsPerSetting <= 0) throw std::invalid_argument("simulate_measurements: shots <= 0");
  std::vector<MeasurementRecord> out;
  for (const auto& g : groups) {
    const auto p = outcome_probabilities(rho, g, readoutError);
    out.push_back({g.setting, multinomial(shotsPerSetting, p, rng),
                   static_cast<double>(shotsPerSetting)});
  }
  return out;
}

std::vector<MeasurementRecord> expected_measurements(const DensityMatrix& rho,
                                                     const std::vector<ProjectorGroup>& groups,
                                                     int shotsPerSetting, double readoutError) {
  if (shotsPerSetting <= 0) throw std::invalid_argument("expected_measurements: shots <= 0");
  std::vector<MeasurementRecord> out;
  for (const auto& g : groups) {
    auto p = outcome_probabilities(rho, g, readoutError);
    double total = 0.0;
    for (double x : p) total += x;
    for (auto& x : p) x *= shotsPerSetting / total;
    out.push_back({g.setting, p, static_cast<double>(shotsPerSetting)});
  }
  return out;
}

namespace {

struct Likelihood {
  const Operator& vectors;   // d x N, column i is the projector vector
  const Eigen::VectorXd& f;  // counts
  double floor;

  Eigen::VectorXd probabilities(const Operator& rho) const {
    return (vectors.adjoint() * rho * vectors).diagonal().real();
  }
  double value(const Eigen::VectorXd& p, bool* floored = nullptr) const {
    double l = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (f(i) == 0.0) continue;
      if (p(i) < floor && floored) *floored = true;
      l += f(i) * std::log(std::max(p(i), floor));
    }
    return l;
  }
};

}  // namespace

MLEResult mle_reconstruct(const std::vector<MeasurementRecord>& records,
                          const std::vector<ProjectorGroup>& groups,
                          const MLEOptions& options) {
  if (records.empty() || records.size() != groups.size())
    throw std::invalid_argument("mle_reconstruct: records and groups must match");
  const Eigen::Index d = groups.front().basis.rows();
  const Eigen::Index n = static_cast<Eigen::Index>(groups.size()) * d;
  Operator vectors(d, n);
  Eigen::VectorXd f(n);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    records[g].validate();
    if (static_cast<Eigen::Index>(records[g].counts.size()) != d)
      throw std::invalid_argument("mle_reconstruct: record has wrong outcome count");
    for (Eigen::Index k = 0; k < d; ++k) {
      const Eigen::Index i = static_cast<Eigen::Index>(g) * d + k;
      vectors.col(i) = groups[g].basis.col(k);
      f(i) = records[g].counts[k];
    }
  }

  MLEResult result;
  result.rank_deficient = measurement_map_rank(groups) < d * d - 1;
  const Likelihood like{vectors, f, options.probability_floor};
  Operator rho = Operator::Identity(d, d) / static_cast<double>(d);
  Eigen::VectorXd p = like.probabilities(rho);
  double l = like.value(p);

  for (int it = 0; it < options.max_iterations; ++it) {
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = f(i) / std::max(p(i), options.probability_floor);
    const Operator r = vectors * w.cast<cplx>().asDiagonal() * vectors.adjoint();
    Operator candidate = r * rho * r;
    candidate = 0.5 * (candidate + candidate.adjoint());
    candidate /= candidate.trace().real();

    double lambda = 0.0;
    bool accepted = false;
    Operator next;
    Eigen::VectorXd pn;
    double ln = l;
    while (lambda < 1.0 - 1e-9) {
      next = (1.0 - lambda) * candidate + lambda * rho;
      pn = like.probabilities(next);
      ln = like.value(pn);
      if (ln > l) {
        accepted = true;
        break;
      }
      lambda = 0.5 + 0.5 * lambda;
    }
    result.iterations = it + 1;
    if (!accepted) {
      result.converged = true;
      break;
    }
    const double gain = ln - l;
    rho = next;
    p = pn;
    l = ln;
    result.trace.push_back(l);
    if (gain < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  like.value(p, &result.floored);
  result.log_likelihood = l;
  result.rho_est = DensityMatrix::from_matrix(rho);
  return result;
}

MLEResult mle_reconstruct(const std::vector<MeasurementRecord>& records,
                          const SpinManifold& manifold, const MLEOptions& options) {
  std::vector<MeasurementSetting> settings;
  for (const auto& r : records) settings.push_back(r.setting);
  return mle_reconstruct(records, projector_set(settings, manifold), options);
}

BootstrapResult bootstrap_fidelity(const DensityMatrix& rhoEst, const DensityMatrix& rhoIdeal,
                                   const std::vector<ProjectorGroup>& groups, int shots,
                                   int resamples, std::uint64_t seed, unsigned workers,
                                   BootstrapMode mode) {
  if (resamples < 2) throw std::invalid_argument("bootstrap_fidelity: resamples must be >= 2");
  BootstrapResult out;
  out.fidelity = uhlmann_fidelity(rhoEst, rhoIdeal);
  out.samples.assign(static_cast<std::size_t>(resamples), 0.0);
  parallel_for(out.samples.size(), workers, [&](std::size_t b) {
    Rng rng = Rng::stream(seed, 0, b);
    const auto records = mode == BootstrapMode::exact
                             ? expected_measurements(rhoEst, groups, shots)
                             : simulate_measurements(rhoEst, groups, shots, rng);
    out.samples[b] = uhlmann_fidelity(mle_reconstruct(records, groups).rho_est, rhoIdeal);
  });
  const double mean = pairwise_sum(out.samples) / resamples;
  std::vector<double> sq(out.samples.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = std::pow(out.samples[i] - mean, 2);
  out.sigma = std::sqrt(pairwise_sum(sq) / (resamples - 1));
  return out;
}

void write_records(std::ostream& out, const std::vector<MeasurementRecord>& records) {
  for (const auto& r : records) {
    nlohmann::json j;
    j["thetaX"] = r.setting.theta_x;
    j["thetaY"] = r.setting.theta_y;
    j["counts"] = r.counts;
    j["shots"] = r.shots;
    out << j.dump() << '\n';
  }
}

std::vector<MeasurementRecord> read_records(std::istream& in) {
  std::vector<MeasurementRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line);
    MeasurementRecord r;
    r.setting = {j.at("thetaX").get<double>(), j.at("thetaY").get<double>()};
    r.counts = j.at("counts").get<std::vector<double>>();
    r.shots = j.at("shots").get<double>();
    r.validate();
    out.push_back(std::move(r));
  }
  return out;
}

std::string mle_result_json(const MLEResult& result) {
  nlohmann::json j;
  nlohmann::json rho = nlohmann::json::array();
  const auto& m = result.rho_est.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rho.push_back(row);
  }
  j["rhoEst"] = rho;
  j["logLikelihood"] = result.log_likelihood;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["floored"] = result.floored;
  j["rankDeficient"] = result.rank_deficient;
  return j.dump();
}

}  // namespace spincat
