#pragma once

// Experiment configuration. Files are JSON objects; the schema lives in
// docs/config.md and every shipped preset is a complete example.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fockbarrier/hamiltonians.hpp"
#include "fockbarrier/phase_core.hpp"
#include "fockbarrier/wigner.hpp"

namespace fockbarrier {

enum class Scenario { CoherentIo, FockIo, FockKerr, EnergySweep, FockSweep, ForbiddenDiagnostics };

std::string to_string(Scenario scenario);
/// Throws ConfigError("scenario", ...) for unknown names.
Scenario parse_scenario(std::string_view name);

/// D(alpha)|n> with alpha = (q_bar + i p_bar)/sqrt2.
struct InitialState {
  int n = 0;
  double q_bar = 0.0;
  double p_bar = 0.0;

  ComplexAmplitude alpha() const { return amplitude_from_phase(q_bar, p_bar); }
};

struct TimeSpec {
  double t_max = 3.0;
  double dt = 0.05;
  /// Exact-track horizon; defaults to t_max.
  std::optional<double> exact_t_max;

  double exact_horizon() const { return exact_t_max.value_or(t_max); }
};

struct GridSpec {
  double q_min = -15.0;
  double q_max = 15.0;
  std::size_t n_q = 601;
  double p_min = -15.0;
  double p_max = 15.0;
  std::size_t n_p = 601;
  /// Largest |psi| tolerated at the q boundary.
  double boundary_tolerance = 1e-8;

  PhaseGrid make() const { return PhaseGrid(q_min, q_max, n_q, p_min, p_max, n_p); }
};

struct TwaSpec {
  bool enabled = true;
  std::size_t N = 100000;
  std::uint64_t seed = 20240917;
  /// Shift initial momenta to the quantum mean energy of each state.
  bool calibrate = false;
  /// Write the ensemble at each Wigner snapshot time.
  bool dump_ensembles = false;
};

struct WignerSpec {
  /// Times at which full Wigner grids are written.
  std::vector<double> snapshot_times;
  std::size_t dump_stride = 4;
  /// Spacing of negativity/forbidden-volume/fringe diagnostics; 0 disables.
  double diagnostics_dt = 0.0;
  double fringe_threshold = 1e-6;
};

struct SweepSpec {
  double t = 3.0;
  double q_bar = -3.0;
  /// energy-sweep: Fock index and evenly spaced mean-energy targets.
  int n = 1;
  double energy_min = -1.6;
  double energy_max = -0.05;
  std::size_t points = 12;
  /// fock-sweep: common mean energy and the Fock indices.
  double energy = -0.79;
  std::vector<int> n_values{0, 1, 2, 3};
  /// Bisection bracket and tolerance on Im alpha.
  double im_alpha_lo = 0.0;
  double im_alpha_hi = 4.0;
  double im_alpha_tol = 1e-8;
};

struct ExperimentConfig {
  std::string name;
  Scenario scenario = Scenario::CoherentIo;
  HamiltonianSpec hamiltonian;
  std::vector<InitialState> states;
  TimeSpec time;
  GridSpec grid;
  TwaSpec twa;
  WignerSpec wigner;
  PlateauOptions plateau;
  SweepSpec sweep;
  std::filesystem::path output_dir;
  bool strict = false;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Parses and validates. `origin` prefixes error messages (usually a path).
ExperimentConfig parse_config(std::string_view text, const std::string& origin = "config");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON with every field explicit. `with_output` controls whether
/// the output directory is included.
std::string config_to_json(const ExperimentConfig& config, bool with_output = true);

/// SHA-256 of the canonical JSON without the output directory.
std::string config_hash(const ExperimentConfig& config);

}  // namespace fockbarrier
