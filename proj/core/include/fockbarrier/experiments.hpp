#pragma once

// Scenario orchestration: exact and semiclassical runs for a list of initial
// states, parameter sweeps, and their serialisation into one output directory.

#include <optional>
#include <string>
#include <vector>

#include "fockbarrier/config.hpp"
#include "fockbarrier/output.hpp"
#include "fockbarrier/series.hpp"
#include "fockbarrier/wigner.hpp"

namespace fockbarrier {

std::string library_version();

struct DiagnosticsRow {
  double t = 0.0;
  double negativity = 0.0;
  std::optional<double> forbidden_volume;
  std::optional<int> fringes;
  double p_wigner = 0.0;
  double p_marginal = 0.0;
  /// sup_q |Int W dp - |psi|^2|.
  double marginal_error = 0.0;
  double wigner_norm = 0.0;
};

struct StateResult {
  InitialState state;
  std::string label;
  double energy_closed_form = 0.0;
  double energy_matrix = 0.0;
  double sigma_h = 0.0;
  /// Initial Wigner mass on {H > 0}; a semiclassical reference.
  double p0_reference = 0.0;

  TransmissionSeries exact;
  TransmissionSeries twa;
  TransmissionSeries analytic;
  std::vector<PlateauInterval> plateaus;
  std::vector<DiagnosticsRow> diagnostics;

  double twa_delta_p = 0.0;
  double twa_initial_energy = 0.0;
  std::vector<std::size_t> forbidden_occupancy;
  std::size_t sub_barrier_left = 0;

  TruncationRecord truncation;
};

struct EnergySweepRow {
  double target_energy = 0.0;
  std::optional<double> im_alpha;
  std::optional<double> energy_check;
  std::optional<double> p_exact;
  std::optional<double> p_twa;
  std::optional<double> sigma_twa;
  std::string note;

  std::optional<double> discrepancy() const {
    if (!p_exact || !p_twa) return std::nullopt;
    return *p_exact - *p_twa;
  }
};

struct FockSweepRow {
  int n = 0;
  double im_alpha = 0.0;
  double p_exact = 0.0;
  double p_twa = 0.0;
  double sigma_twa = 0.0;
  double p0_reference = 0.0;
  double sigma_h = 0.0;
};

struct RunResult {
  RunManifest manifest;
  std::vector<StateResult> states;
  std::vector<EnergySweepRow> energy_rows;
  std::vector<FockSweepRow> fock_rows;
};

/// Im alpha in [lo, hi] with closed-form mean energy of D(alpha)|n> equal to
/// `target` at fixed Re alpha = q_bar / sqrt2, by bisection. Throws
/// NumericError when the bracket holds no root.
double solve_im_alpha(const HamiltonianSpec& spec, int n, double q_bar, double target,
                      double lo = 0.0, double hi = 4.0, double tol = 1e-8);

/// Runs one scenario and writes its outputs under config.output_dir.
/// Numeric failures are rethrown with the scenario and state prepended.
RunResult run(const ExperimentConfig& config);

}  // namespace fockbarrier
