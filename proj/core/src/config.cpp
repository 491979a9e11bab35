#include "fockbarrier/config.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "fockbarrier/errors.hpp"
#include "fockbarrier/output.hpp"

namespace fockbarrier {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::pair<Scenario, const char*> kScenarioNames[] = {
    {Scenario::CoherentIo, "coherent-io"},
    {Scenario::FockIo, "fock-io"},
    {Scenario::FockKerr, "fock-kerr"},
    {Scenario::EnergySweep, "energy-sweep"},
    {Scenario::FockSweep, "fock-sweep"},
    {Scenario::ForbiddenDiagnostics, "forbidden-diagnostics"},
};

// Typed access to one JSON object with unknown-key rejection.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected a table");
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const {
    seen_.insert(key);
    return node_.contains(key);
  }

  const json& raw(const std::string& key) const {
    seen_.insert(key);
    return node_.at(key);
  }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number()) throw ConfigError(child(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(child(key), "must be finite");
    return x;
  }

  template <typename Int>
  Int integer(const std::string& key, Int fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number_integer()) throw ConfigError(child(key), "expected an integer");
    if constexpr (std::is_unsigned_v<Int>) {
      if (v.is_number_unsigned()) return static_cast<Int>(v.get<std::uint64_t>());
      if (v.get<std::int64_t>() < 0) throw ConfigError(child(key), "must be non-negative");
      return static_cast<Int>(v.get<std::int64_t>());
    } else {
      return static_cast<Int>(v.get<std::int64_t>());
    }
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_boolean()) throw ConfigError(child(key), "expected true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_string()) throw ConfigError(child(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_array()) throw ConfigError(child(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(child(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  std::vector<int> integers(const std::string& key, std::vector<int> fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_array()) throw ConfigError(child(key), "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer()) throw ConfigError(child(key) + "[" + std::to_string(i) + "]", "expected an integer");
      out.push_back(v[i].get<int>());
    }
    return out;
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(child(it.key()), "unknown key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  mutable std::set<std::string> seen_;
};

bool on_step(double t, double dt) {
  const double k = std::round(t / dt);
  return std::abs(t - k * dt) <= 1e-9 * std::max(1.0, t);
}

bool needs_kerr(Scenario s) {
  return s == Scenario::FockKerr || s == Scenario::EnergySweep || s == Scenario::FockSweep ||
         s == Scenario::ForbiddenDiagnostics;
}

bool uses_states(Scenario s) { return s != Scenario::EnergySweep && s != Scenario::FockSweep; }

HamiltonianSpec read_hamiltonian(const Section& root) {
  if (!root.has("hamiltonian")) throw ConfigError("hamiltonian", "missing");
  Section h(root.raw("hamiltonian"), "hamiltonian");
  const std::string model = h.text("model", "");
  HamiltonianSpec spec;
  if (model == "inverted-oscillator") {
    spec = HamiltonianSpec::inverted_oscillator(h.integer<int>("n_max", 100));
    if (h.has("epsilon2") || h.has("K")) {
      throw ConfigError("hamiltonian", "the inverted oscillator takes no epsilon2 or K");
    }
  } else if (model == "kerr") {
    spec = HamiltonianSpec::kerr(h.number("epsilon2", 0.5), h.number("K", 0.01),
                                 h.integer<int>("n_max", 100));
  } else {
    throw ConfigError("hamiltonian.model", "expected \"inverted-oscillator\" or \"kerr\"");
  }
  h.finish();
  return spec;
}

}  // namespace

std::string to_string(Scenario scenario) {
  for (const auto& [s, name] : kScenarioNames) {
    if (s == scenario) return name;
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  for (const auto& [s, n] : kScenarioNames) {
    if (name == n) return s;
  }
  throw ConfigError("scenario", "unknown scenario \"" + std::string(name) + "\"");
}

void ExperimentConfig::validate() const {
  if (needs_kerr(scenario)) {
    if (hamiltonian.kind != ModelKind::KerrInverted) {
      throw ConfigError("hamiltonian.model", to_string(scenario) + " needs the kerr model");
    }
    if (!(hamiltonian.kerr_K > 0.0)) throw ConfigError("hamiltonian.K", "must be positive");
  } else if (hamiltonian.kind != ModelKind::InvertedOscillator) {
    throw ConfigError("hamiltonian.model", to_string(scenario) + " needs the inverted oscillator");
  }
  if (!(hamiltonian.epsilon2 > 0.0)) throw ConfigError("hamiltonian.epsilon2", "must be positive");
  if (hamiltonian.n_max < 4) throw ConfigError("hamiltonian.n_max", "must be at least 4");

  if (uses_states(scenario)) {
    if (states.empty()) throw ConfigError("states", "at least one initial state is required");
    for (std::size_t i = 0; i < states.size(); ++i) {
      const std::string path = "states[" + std::to_string(i) + "]";
      if (states[i].n < 0 || states[i].n > hamiltonian.n_max) {
        throw ConfigError(path + ".n", "outside 0..n_max");
      }
      if (scenario == Scenario::CoherentIo && states[i].n != 0) {
        throw ConfigError(path + ".n", "coherent-io takes n = 0 only");
      }
    }
  }

  if (!(time.dt > 0.0)) throw ConfigError("time.dt", "must be positive");
  if (!(time.t_max > 0.0)) throw ConfigError("time.t_max", "must be positive (empty time grid)");
  if (!on_step(time.t_max, time.dt)) throw ConfigError("time.t_max", "must be a multiple of dt");
  if (time.exact_t_max) {
    if (!(*time.exact_t_max > 0.0) || *time.exact_t_max > time.t_max) {
      throw ConfigError("time.exact_t_max", "must lie in (0, t_max]");
    }
    if (!on_step(*time.exact_t_max, time.dt)) {
      throw ConfigError("time.exact_t_max", "must be a multiple of dt");
    }
  }

  if (!(grid.q_min < grid.q_max)) throw ConfigError("grid.q_max", "must exceed q_min");
  if (!(grid.p_min < grid.p_max)) throw ConfigError("grid.p_max", "must exceed p_min");
  if (grid.n_q < 5) throw ConfigError("grid.n_q", "must be at least 5");
  if (grid.n_p < 5) throw ConfigError("grid.n_p", "must be at least 5");
  if (!(grid.boundary_tolerance > 0.0)) throw ConfigError("grid.boundary_tolerance", "must be positive");

  if (twa.N < 100) throw ConfigError("twa.N", "must be at least 100");

  for (std::size_t i = 0; i < wigner.snapshot_times.size(); ++i) {
    const double t = wigner.snapshot_times[i];
    const std::string path = "wigner.snapshot_times[" + std::to_string(i) + "]";
    if (t < 0.0 || t > time.exact_horizon() + 1e-12) {
      throw ConfigError(path, "outside the exact-track window");
    }
    if (!on_step(t, time.dt)) throw ConfigError(path, "must be a multiple of dt");
  }
  if (wigner.dump_stride == 0) throw ConfigError("wigner.dump_stride", "must be positive");
  if (wigner.diagnostics_dt < 0.0) throw ConfigError("wigner.diagnostics_dt", "must be non-negative");
  if (wigner.diagnostics_dt > 0.0 && !on_step(wigner.diagnostics_dt, time.dt)) {
    throw ConfigError("wigner.diagnostics_dt", "must be a multiple of dt");
  }
  if (!(wigner.fringe_threshold >= 0.0 && wigner.fringe_threshold < 1.0)) {
    throw ConfigError("wigner.fringe_threshold", "must lie in [0, 1)");
  }
  if (hamiltonian.kind == ModelKind::KerrInverted && wigner.diagnostics_dt > 0.0 &&
      grid.make().p_axis().index_of(0.0) == UniformAxis::npos) {
    throw ConfigError("grid.n_p", "fringe counts need a node at p = 0");
  }

  if (!(plateau.threshold > 0.0 && plateau.threshold < 1.0)) {
    throw ConfigError("plateau.threshold", "must lie in (0, 1)");
  }
  if (plateau.min_samples < 1) throw ConfigError("plateau.min_samples", "must be positive");

  if (scenario == Scenario::EnergySweep || scenario == Scenario::FockSweep) {
    if (!(sweep.t > 0.0)) throw ConfigError("sweep.t", "must be positive");
    if (!(sweep.im_alpha_lo < sweep.im_alpha_hi)) throw ConfigError("sweep.im_alpha_hi", "must exceed im_alpha_lo");
    if (!(sweep.im_alpha_tol > 0.0)) throw ConfigError("sweep.im_alpha_tol", "must be positive");
  }
  if (scenario == Scenario::EnergySweep) {
    if (sweep.points < 2) throw ConfigError("sweep.points", "must be at least 2");
    if (!(sweep.energy_min < sweep.energy_max)) throw ConfigError("sweep.energy_max", "must exceed energy_min");
    if (sweep.n < 0 || sweep.n > hamiltonian.n_max) throw ConfigError("sweep.n", "outside 0..n_max");
  }
  if (scenario == Scenario::FockSweep) {
    if (sweep.n_values.empty()) throw ConfigError("sweep.n_values", "must not be empty");
    for (std::size_t i = 0; i < sweep.n_values.size(); ++i) {
      if (sweep.n_values[i] < 0 || sweep.n_values[i] > hamiltonian.n_max) {
        throw ConfigError("sweep.n_values[" + std::to_string(i) + "]", "outside 0..n_max");
      }
    }
  }
}

ExperimentConfig parse_config(std::string_view text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin, std::string("not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  Section root(doc, "");
  cfg.name = root.text("name", "");
  if (!root.has("scenario")) throw ConfigError("scenario", "missing");
  cfg.scenario = parse_scenario(root.text("scenario", ""));
  cfg.hamiltonian = read_hamiltonian(root);

  if (root.has("states")) {
    const json& list = root.raw("states");
    if (!list.is_array()) throw ConfigError("states", "expected an array of tables");
    for (std::size_t i = 0; i < list.size(); ++i) {
      Section s(list[i], "states[" + std::to_string(i) + "]");
      InitialState st;
      st.n = s.integer<int>("n", 0);
      if (!s.has("q_bar")) throw ConfigError(s.child("q_bar"), "missing");
      if (!s.has("p_bar")) throw ConfigError(s.child("p_bar"), "missing");
      st.q_bar = s.number("q_bar", 0.0);
      st.p_bar = s.number("p_bar", 0.0);
      s.finish();
      cfg.states.push_back(st);
    }
  }
  if (root.has("time")) {
    Section t(root.raw("time"), "time");
    cfg.time.t_max = t.number("t_max", cfg.time.t_max);
    cfg.time.dt = t.number("dt", cfg.time.dt);
    if (t.has("exact_t_max")) cfg.time.exact_t_max = t.number("exact_t_max", 0.0);
    t.finish();
  }
  if (root.has("grid")) {
    Section g(root.raw("grid"), "grid");
    cfg.grid.q_min = g.number("q_min", cfg.grid.q_min);
    cfg.grid.q_max = g.number("q_max", cfg.grid.q_max);
    cfg.grid.n_q = g.integer<std::size_t>("n_q", cfg.grid.n_q);
    cfg.grid.p_min = g.number("p_min", cfg.grid.p_min);
    cfg.grid.p_max = g.number("p_max", cfg.grid.p_max);
    cfg.grid.n_p = g.integer<std::size_t>("n_p", cfg.grid.n_p);
    cfg.grid.boundary_tolerance = g.number("boundary_tolerance", cfg.grid.boundary_tolerance);
    g.finish();
  }
  if (root.has("twa")) {
    Section t(root.raw("twa"), "twa");
    cfg.twa.enabled = t.boolean("enabled", cfg.twa.enabled);
    cfg.twa.N = t.integer<std::size_t>("N", cfg.twa.N);
    cfg.twa.seed = t.integer<std::uint64_t>("seed", cfg.twa.seed);
    cfg.twa.calibrate = t.boolean("calibrate", cfg.twa.calibrate);
    cfg.twa.dump_ensembles = t.boolean("dump_ensembles", cfg.twa.dump_ensembles);
    t.finish();
  }
  if (root.has("wigner")) {
    Section w(root.raw("wigner"), "wigner");
    cfg.wigner.snapshot_times = w.numbers("snapshot_times", cfg.wigner.snapshot_times);
    cfg.wigner.dump_stride = w.integer<std::size_t>("dump_stride", cfg.wigner.dump_stride);
    cfg.wigner.diagnostics_dt = w.number("diagnostics_dt", cfg.wigner.diagnostics_dt);
    cfg.wigner.fringe_threshold = w.number("fringe_threshold", cfg.wigner.fringe_threshold);
    w.finish();
  }
  if (root.has("plateau")) {
    Section p(root.raw("plateau"), "plateau");
    cfg.plateau.threshold = p.number("threshold", cfg.plateau.threshold);
    cfg.plateau.min_samples = p.integer<std::size_t>("min_samples", cfg.plateau.min_samples);
    p.finish();
  }
  if (root.has("sweep")) {
    Section s(root.raw("sweep"), "sweep");
    cfg.sweep.t = s.number("t", cfg.sweep.t);
    cfg.sweep.q_bar = s.number("q_bar", cfg.sweep.q_bar);
    cfg.sweep.n = s.integer<int>("n", cfg.sweep.n);
    cfg.sweep.energy_min = s.number("energy_min", cfg.sweep.energy_min);
    cfg.sweep.energy_max = s.number("energy_max", cfg.sweep.energy_max);
    cfg.sweep.points = s.integer<std::size_t>("points", cfg.sweep.points);
    cfg.sweep.energy = s.number("energy", cfg.sweep.energy);
    cfg.sweep.n_values = s.integers("n_values", cfg.sweep.n_values);
    cfg.sweep.im_alpha_lo = s.number("im_alpha_lo", cfg.sweep.im_alpha_lo);
    cfg.sweep.im_alpha_hi = s.number("im_alpha_hi", cfg.sweep.im_alpha_hi);
    cfg.sweep.im_alpha_tol = s.number("im_alpha_tol", cfg.sweep.im_alpha_tol);
    s.finish();
  }
  cfg.output_dir = root.text("output", "");
  cfg.strict = root.boolean("strict", false);
  root.finish();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string config_to_json(const ExperimentConfig& c, bool with_output) {
  ordered_json j;
  j["name"] = c.name;
  j["scenario"] = to_string(c.scenario);
  ordered_json h;
  if (c.hamiltonian.kind == ModelKind::InvertedOscillator) {
    h["model"] = "inverted-oscillator";
  } else {
    h["model"] = "kerr";
    h["epsilon2"] = c.hamiltonian.epsilon2;
    h["K"] = c.hamiltonian.kerr_K;
  }
  h["n_max"] = c.hamiltonian.n_max;
  j["hamiltonian"] = h;
  ordered_json states = ordered_json::array();
  for (const auto& s : c.states) states.push_back({{"n", s.n}, {"q_bar", s.q_bar}, {"p_bar", s.p_bar}});
  j["states"] = states;
  ordered_json t{{"t_max", c.time.t_max}, {"dt", c.time.dt}};
  if (c.time.exact_t_max) t["exact_t_max"] = *c.time.exact_t_max;
  j["time"] = t;
  j["grid"] = {{"q_min", c.grid.q_min}, {"q_max", c.grid.q_max}, {"n_q", c.grid.n_q},
               {"p_min", c.grid.p_min}, {"p_max", c.grid.p_max}, {"n_p", c.grid.n_p},
               {"boundary_tolerance", c.grid.boundary_tolerance}};
  j["twa"] = {{"enabled", c.twa.enabled}, {"N", c.twa.N}, {"seed", c.twa.seed},
              {"calibrate", c.twa.calibrate}, {"dump_ensembles", c.twa.dump_ensembles}};
  j["wigner"] = {{"snapshot_times", c.wigner.snapshot_times}, {"dump_stride", c.wigner.dump_stride},
                 {"diagnostics_dt", c.wigner.diagnostics_dt},
                 {"fringe_threshold", c.wigner.fringe_threshold}};
  j["plateau"] = {{"threshold", c.plateau.threshold}, {"min_samples", c.plateau.min_samples}};
  j["sweep"] = {{"t", c.sweep.t},
                {"q_bar", c.sweep.q_bar},
                {"n", c.sweep.n},
                {"energy_min", c.sweep.energy_min},
                {"energy_max", c.sweep.energy_max},
                {"points", c.sweep.points},
                {"energy", c.sweep.energy},
                {"n_values", c.sweep.n_values},
                {"im_alpha_lo", c.sweep.im_alpha_lo},
                {"im_alpha_hi", c.sweep.im_alpha_hi},
                {"im_alpha_tol", c.sweep.im_alpha_tol}};
  if (with_output) j["output"] = c.output_dir.generic_string();
  j["strict"] = c.strict;
  return j.dump(2) + "\n";
}

std::string config_hash(const ExperimentConfig& config) {
  return sha256_hex(config_to_json(config, false));
}

}  // namespace fockbarrier
