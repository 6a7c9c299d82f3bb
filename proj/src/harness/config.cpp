#include "spincat/harness/config.hpp"

#include "spincat/analytics.hpp"
#include "spincat/errors.hpp"

#include <toml.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace spincat {

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kNames[] = {
    {ExperimentKind::fig3_sweep, "fig3_sweep"},
    {ExperimentKind::phase_sweep, "phase_sweep"},
    {ExperimentKind::breakeven, "breakeven"},
    {ExperimentKind::erasure_scan, "erasure_scan"},
    {ExperimentKind::kl_report, "kl_report"},
    {ExperimentKind::tomo_calibration, "tomo_calibration"},
};

// Allowed keys per table; "" is the root.
const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"", {"experiment", "seed", "trials", "workers", "logical", "physical", "noise",
            "correction", "offsets", "fidelity", "fit", "phase", "tomography", "kl"}},
      {"logical", {"two_j", "g_j"}},
      {"physical", {"two_j", "g_j"}},
      {"noise", {"sigma_over_gj", "sigma_b", "delays", "delay_grid"}},
      {"noise.delay_grid", {"start", "stop", "step"}},
      {"correction", {"enabled", "order", "pulse_model", "phi_c", "heating_rate",
                      "residual_excitation", "fock_cutoff", "quadrupole_hz",
                      "quadrupole_compensated"}},
      {"offsets", {"physical", "uncorrected", "corrected", "delta", "delta_offset"}},
      {"fidelity", {"path", "shots", "readout_error", "bootstrap"}},
      {"fit", {"epsilon", "resamples"}},
      {"phase", {"points", "sigma_over_gj"}},
      {"tomography", {"seeds", "scaling_shots"}},
      {"kl", {"max_order"}},
  };
  return s;
}

void check_keys(const toml::table& table, const std::string& path) {
  const auto& allowed = schema().at(path);
  for (const auto& [key, node] : table) {
    const std::string k(key.str());
    if (!allowed.count(k))
      throw ConfigError("unknown key '" + (path.empty() ? k : path + "." + k) + "'");
    const std::string child = path.empty() ? k : path + "." + k;
    if (schema().count(child)) {
      if (!node.is_table()) throw ConfigError("'" + child + "' must be a table");
      check_keys(*node.as_table(), child);
    }
  }
}

std::string where(const std::string& table, const std::string& key) {
  return table.empty() ? key : table + "." + key;
}

class Reader {
 public:
  explicit Reader(const toml::table& root) : root_(root) {}

  const toml::node* find(const std::string& table, const std::string& key) const {
    const toml::table* t = &root_;
    if (!table.empty()) {
      std::stringstream ss(table);
      std::string part;
      while (std::getline(ss, part, '.')) {
        const toml::node* n = t->get(part);
        if (!n) return nullptr;
        t = n->as_table();
      }
    }
    return t->get(key);
  }

  void real(const std::string& table, const std::string& key, double& out) const {
    const toml::node* n = find(table, key);
    if (!n) return;
    if (auto v = n->value<double>()) {
      out = *v;
      return;
    }
    throw ConfigError("'" + where(table, key) + "' must be a number");
  }

  template <typename Int>
  void integer(const std::string& table, const std::string& key, Int& out) const {
    const toml::node* n = find(table, key);
    if (!n) return;
    if (!n->is_integer()) throw ConfigError("'" + where(table, key) + "' must be an integer");
    const std::int64_t v = n->as_integer()->get();
    if (v < 0 && std::is_unsigned_v<Int>)
      throw ConfigError("'" + where(table, key) + "' must be non-negative");
    out = static_cast<Int>(v);
  }

  void boolean(const std::string& table, const std::string& key, bool& out) const {
    const toml::node* n = find(table, key);
    if (!n) return;
    if (!n->is_boolean()) throw ConfigError("'" + where(table, key) + "' must be a boolean");
    out = n->as_boolean()->get();
  }

  void string(const std::string& table, const std::string& key, std::string& out) const {
    const toml::node* n = find(table, key);
    if (!n) return;
    if (!n->is_string()) throw ConfigError("'" + where(table, key) + "' must be a string");
    out = n->as_string()->get();
  }

  template <typename T>
  void array(const std::string& table, const std::string& key, std::vector<T>& out) const {
    const toml::node* n = find(table, key);
    if (!n) return;
    const toml::array* a = n->as_array();
    if (!a) throw ConfigError("'" + where(table, key) + "' must be an array");
    out.clear();
    for (const auto& e : *a) {
      if constexpr (std::is_integral_v<T>) {
        if (!e.is_integer()) throw ConfigError("'" + where(table, key) + "' must hold integers");
        out.push_back(static_cast<T>(e.as_integer()->get()));
      } else {
        auto v = e.value<double>();
        if (!v) throw ConfigError("'" + where(table, key) + "' must hold numbers");
        out.push_back(*v);
      }
    }
  }

 private:
  const toml::table& root_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "unknown";
}

ExperimentKind experiment_from_string(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  require(trials > 0, "trials must be > 0");
  require(workers >= 1, "workers must be >= 1");
  for (const auto* m : {&logical, &physical}) {
    require(m->two_j >= 1 && m->two_j % 2 == 1, "manifold two_j must be odd and positive");
    require(m->g_j > 0.0 && std::isfinite(m->g_j), "manifold g_j must be > 0");
  }
  require(!correction || logical.two_j == 5, "correction is only modeled for two_j = 5");
  require(order == 1 || order == 2, "correction.order must be 1 or 2");
  require(phi_c >= 0.0 && phi_c < 2.0 * kPi, "correction.phi_c must be in [0, 2 pi)");
  require(heating_rate >= 0.0, "correction.heating_rate must be >= 0");
  require(residual_excitation >= 0.0 && residual_excitation <= 1.0,
          "correction.residual_excitation must be in [0, 1]");
  require(fock_cutoff >= 2 && fock_cutoff <= 8, "correction.fock_cutoff must be in [2, 8]");
  require(std::isfinite(quadrupole_hz), "correction.quadrupole_hz must be finite");
  for (double o : {offset_physical, offset_uncorrected, offset_corrected})
    require(o >= 0.0 && o < 0.5, "offsets must be in [0, 0.5)");
  require(delta >= 0.0 && std::isfinite(delta), "offsets.delta must be >= 0");
  require(shots > 0, "fidelity.shots must be > 0");
  require(readout_error >= 0.0 && readout_error <= 1.0, "fidelity.readout_error must be in [0, 1]");
  require(bootstrap >= 2, "fidelity.bootstrap must be >= 2");
  require(resamples >= 0, "fit.resamples must be >= 0");
  require(sigma_b >= 0.0 && std::isfinite(sigma_b), "noise.sigma_b must be >= 0");
  require(all_finite(sigma_over_gj) && all_finite(delays) && all_finite(epsilon),
          "grids must be finite");
  for (double s : sigma_over_gj) require(s >= 0.0, "noise.sigma_over_gj must be >= 0");
  for (double t : delays) require(t >= 0.0, "noise.delays must be >= 0");

  switch (experiment) {
    case ExperimentKind::fig3_sweep:
      require(!sigma_over_gj.empty(), "fig3_sweep needs noise.sigma_over_gj");
      break;
    case ExperimentKind::phase_sweep:
      require(correction, "phase_sweep needs correction.enabled = true");
      require(phase_points >= 10, "phase.points must be >= 10");
      require(phase_sigma_over_gj >= 0.0, "phase.sigma_over_gj must be >= 0");
      break;
    case ExperimentKind::breakeven:
      require(!delays.empty(), "breakeven needs noise.delays");
      require(sigma_b > 0.0, "breakeven needs noise.sigma_b > 0");
      require(!epsilon.empty(), "breakeven needs fit.epsilon");
      require(delays.size() >= 3, "breakeven needs >= 3 delays");
      break;
    case ExperimentKind::erasure_scan:
      require(heating_rate > 0.0, "erasure_scan needs correction.heating_rate > 0");
      require(delays.size() >= 3, "erasure_scan needs >= 3 delays");
      require(correction, "erasure_scan needs correction.enabled = true");
      break;
    case ExperimentKind::kl_report:
      require(kl_max_order >= 0 && kl_max_order <= 6, "kl.max_order must be in [0, 6]");
      break;
    case ExperimentKind::tomo_calibration:
      require(tomo_seeds > 0, "tomography.seeds must be > 0");
      require(!scaling_shots.empty(), "tomography.scaling_shots must be nonempty");
      for (int s : scaling_shots) require(s > 0, "tomography.scaling_shots must be > 0");
      break;
  }
}

ExperimentConfig parse_config(std::string_view text, const ConfigOverrides& overrides) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML parse error: " << e.description() << " at line " << e.source().begin.line;
    throw ConfigError(msg.str());
  }
  check_keys(root, "");
  const Reader r(root);

  ExperimentConfig cfg;
  std::string name;
  r.string("", "experiment", name);
  if (name.empty()) {
    if (!overrides.experiment) throw ConfigError("'experiment' is required");
    cfg.experiment = *overrides.experiment;
  } else {
    cfg.experiment = experiment_from_string(name);
    if (overrides.experiment && *overrides.experiment != cfg.experiment)
      throw ConfigError("config is for '" + name + "', not '" +
                        std::string(to_string(*overrides.experiment)) + "'");
  }
  if (overrides.seed) {
    cfg.seed = *overrides.seed;
  } else {
    if (!r.find("", "seed")) throw ConfigError("'seed' is required");
    std::int64_t seed = 0;
    r.integer("", "seed", seed);
    require(seed >= 0, "'seed' must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
  }
  r.integer("", "trials", cfg.trials);
  r.integer("", "workers", cfg.workers);
  if (overrides.trials) cfg.trials = *overrides.trials;
  if (overrides.workers) cfg.workers = *overrides.workers;

  r.integer("logical", "two_j", cfg.logical.two_j);
  r.real("logical", "g_j", cfg.logical.g_j);
  r.integer("physical", "two_j", cfg.physical.two_j);
  r.real("physical", "g_j", cfg.physical.g_j);

  r.array("noise", "sigma_over_gj", cfg.sigma_over_gj);
  r.real("noise", "sigma_b", cfg.sigma_b);
  r.array("noise", "delays", cfg.delays);
  if (r.find("noise", "delay_grid")) {
    if (r.find("noise", "delays"))
      throw ConfigError("noise.delays and noise.delay_grid are exclusive");
    double start = 0.0, stop = -1.0, step = 0.0;
    r.real("noise.delay_grid", "start", start);
    r.real("noise.delay_grid", "stop", stop);
    r.real("noise.delay_grid", "step", step);
    require(step > 0.0 && stop >= start, "noise.delay_grid needs step > 0 and stop >= start");
    const long n = std::lround(std::floor((stop - start) / step + 1e-9));
    require(n < 100000, "noise.delay_grid is too large");
    for (long i = 0; i <= n; ++i) cfg.delays.push_back(start + i * step);
  }

  r.boolean("correction", "enabled", cfg.correction);
  r.integer("correction", "order", cfg.order);
  std::string model = "calibrated";
  r.string("correction", "pulse_model", model);
  if (model == "ideal") cfg.pulse_model = PulseModel::ideal;
  else if (model == "calibrated") cfg.pulse_model = PulseModel::calibrated;
  else throw ConfigError("correction.pulse_model must be 'ideal' or 'calibrated'");
  r.real("correction", "phi_c", cfg.phi_c);
  r.real("correction", "heating_rate", cfg.heating_rate);
  r.real("correction", "residual_excitation", cfg.residual_excitation);
  r.integer("correction", "fock_cutoff", cfg.fock_cutoff);
  r.real("correction", "quadrupole_hz", cfg.quadrupole_hz);
  r.boolean("correction", "quadrupole_compensated", cfg.quadrupole_compensated);

  r.real("offsets", "physical", cfg.offset_physical);
  r.real("offsets", "uncorrected", cfg.offset_uncorrected);
  r.real("offsets", "corrected", cfg.offset_corrected);
  r.real("offsets", "delta", cfg.delta);
  if (r.find("offsets", "delta_offset")) {
    if (r.find("offsets", "delta"))
      throw ConfigError("offsets.delta and offsets.delta_offset are exclusive");
    double off = 0.0;
    r.real("offsets", "delta_offset", off);
    require(off >= 0.0 && off < 0.5, "offsets.delta_offset must be in [0, 0.5)");
    cfg.delta = control_delta_for_offset(off);
  }

  std::string path = "oracle";
  r.string("fidelity", "path", path);
  if (path == "oracle") cfg.path = FidelityPath::oracle;
  else if (path == "realistic") cfg.path = FidelityPath::realistic;
  else throw ConfigError("fidelity.path must be 'oracle' or 'realistic'");
  r.integer("fidelity", "shots", cfg.shots);
  r.real("fidelity", "readout_error", cfg.readout_error);
  r.integer("fidelity", "bootstrap", cfg.bootstrap);

  r.array("fit", "epsilon", cfg.epsilon);
  r.integer("fit", "resamples", cfg.resamples);

  r.integer("phase", "points", cfg.phase_points);
  r.real("phase", "sigma_over_gj", cfg.phase_sigma_over_gj);

  r.integer("tomography", "seeds", cfg.tomo_seeds);
  r.array("tomography", "scaling_shots", cfg.scaling_shots);

  r.integer("kl", "max_order", cfg.kl_max_order);

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["experiment"] = std::string(to_string(c.experiment));
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["logical"] = {{"two_j", c.logical.two_j}, {"g_j", c.logical.g_j}};
  j["physical"] = {{"two_j", c.physical.two_j}, {"g_j", c.physical.g_j}};
  j["noise"] = {{"sigma_over_gj", c.sigma_over_gj}, {"sigma_b", c.sigma_b}, {"delays", c.delays}};
  j["correction"] = {{"enabled", c.correction},
                     {"order", c.order},
                     {"pulse_model", c.pulse_model == PulseModel::ideal ? "ideal" : "calibrated"},
                     {"phi_c", c.phi_c},
                     {"heating_rate", c.heating_rate},
                     {"residual_excitation", c.residual_excitation},
                     {"fock_cutoff", c.fock_cutoff},
                     {"quadrupole_hz", c.quadrupole_hz},
                     {"quadrupole_compensated", c.quadrupole_compensated}};
  j["offsets"] = {{"physical", c.offset_physical},
                  {"uncorrected", c.offset_uncorrected},
                  {"corrected", c.offset_corrected},
                  {"delta", c.delta}};
  j["fidelity"] = {{"path", c.path == FidelityPath::oracle ? "oracle" : "realistic"},
                   {"shots", c.shots},
                   {"readout_error", c.readout_error},
                   {"bootstrap", c.bootstrap}};
  j["fit"] = {{"epsilon", c.epsilon}, {"resamples", c.resamples}};
  j["phase"] = {{"points", c.phase_points}, {"sigma_over_gj", c.phase_sigma_over_gj}};
  j["tomography"] = {{"seeds", c.tomo_seeds}, {"scaling_shots", c.scaling_shots}};
  j["kl"] = {{"max_order", c.kl_max_order}};
  // workers is not echoed
  return nlohmann::json::parse(j.dump());
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_to_json(cfg).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace spincat
