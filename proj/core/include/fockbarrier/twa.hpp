#pragma once

// Truncated Wigner approximation: positive phase-space samplers for displaced
// Fock states, classical propagation of the ensemble and counting estimators
// for transmission.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "fockbarrier/hamiltonians.hpp"
#include "fockbarrier/phase_core.hpp"
#include "fockbarrier/series.hpp"

namespace fockbarrier {

enum class SamplerKind { CoherentGaussian, FockRing };

struct SamplerSpec {
  SamplerKind kind = SamplerKind::CoherentGaussian;
  int n = 0;
  ComplexAmplitude alpha{0.0, 0.0};
  std::size_t N = 100000;

  /// Coherent Gaussian for n = 0, ring otherwise.
  static SamplerSpec for_fock(int n, ComplexAmplitude alpha, std::size_t N = 100000);

  /// Throws ParameterError: N >= 100; FockRing needs n >= 1.
  void validate() const;
};

struct TrajectoryEnsemble {
  std::vector<PhasePoint> points;
  std::uint64_t seed = 0;
  double time = 0.0;
  HamiltonianSpec spec;

  std::size_t size() const noexcept { return points.size(); }
};

/// Draws N points, trajectory i from RngStream(seed, i).
///  - CoherentGaussian: q, p independent normals, sigma = 1/sqrt2, about
///    (sqrt2 Re alpha, sqrt2 Im alpha).
///  - FockRing: action s = (q^2 + p^2)/2 ~ Normal(n + 1/2, 1/2) redrawn until
///    s > 0, angle uniform on [0, 2pi), then translated to the same centre.
///    The map (s, theta) -> (q, p) has unit Jacobian, so this samples the
///    normalised ring density exp(-2 (s - n - 1/2)^2) exactly.
TrajectoryEnsemble sample_initial(const SamplerSpec& sampler, const HamiltonianSpec& spec,
                                  std::uint64_t seed);

double ensemble_mean_energy(const TrajectoryEnsemble& ensemble);

struct Calibration {
  TrajectoryEnsemble ensemble;
  double delta_p = 0.0;
  double mean_energy = 0.0;
};

/// Uniform momentum shift p -> p + dp that brings the ensemble-mean classical
/// energy to `target` (within `tolerance`). Throws CalibrationError when
/// [-bracket, bracket] does not bracket a root.
Calibration calibrate_energy(const TrajectoryEnsemble& ensemble, double target,
                             double bracket = 2.0, double tolerance = 1e-4);

struct IntegratorOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double initial_dt = 1e-3;
  /// Use the hyperbolic closed form for the inverted oscillator.
  bool closed_form_io = true;
  std::size_t max_steps = 1000000;
};

/// Hamilton's equations dq/dt = dH/dp, dp/dt = -dH/dq from `start` at t = 0,
/// reporting the state at each of the increasing `times` (dense output of an
/// adaptive Dormand-Prince 5(4) pair). Throws IntegrationError tagged with
/// `index` on step-size failure.
void integrate_trajectory(const HamiltonianSpec& spec, PhasePoint start,
                          std::span<const double> times, const IntegratorOptions& options,
                          const std::function<void(std::size_t, PhasePoint)>& observer,
                          std::size_t index = 0);

PhasePoint integrate_point(const HamiltonianSpec& spec, PhasePoint start, double t,
                           const IntegratorOptions& options = {});

TrajectoryEnsemble propagate(const TrajectoryEnsemble& ensemble, double t_final,
                             const IntegratorOptions& options = {});

struct TransmissionEstimate {
  double probability = 0.0;
  double sigma = 0.0;
};

/// sqrt(P (1 - P) / N).
double binomial_sigma(double p, std::size_t n);

/// (1/N) sum Theta(q_i - q1) - (1/N) sum Theta(q_i - q2) with binomial sigma.
TransmissionEstimate estimate_transmission(const TrajectoryEnsemble& ensemble, double q1 = 0.0,
                                           double q2 = std::numeric_limits<double>::infinity());

struct TwaOptions {
  std::uint64_t seed = 1;
  /// Shift initial momenta so the ensemble-mean classical energy matches.
  std::optional<double> calibrate_to;
  IntegratorOptions integrator;
  double q1 = 0.0;
  double q2 = std::numeric_limits<double>::infinity();
};

struct TwaRun {
  TransmissionSeries series;
  TrajectoryEnsemble initial;
  double delta_p = 0.0;
  /// Per output time: trajectories that started in the left lobe below the
  /// barrier (q < 0, H < 0) and are now in {H < 0, q > 0}. Kerr only.
  std::vector<std::size_t> forbidden_occupancy;
  /// Count of trajectories that started in the left lobe below the barrier.
  std::size_t sub_barrier_left = 0;
  /// Ensembles at the requested snapshot times (in the order requested).
  std::vector<TrajectoryEnsemble> snapshots;
};

/// Sample, optionally calibrate, and propagate once through all `times`,
/// estimating transmission at each. Snapshot times must be members of `times`.
TwaRun twa_series(const SamplerSpec& sampler, const HamiltonianSpec& spec,
                  std::span<const double> times, const TwaOptions& options,
                  std::span<const double> snapshot_times = {});

/// CSV `idx,q,p` preceded by `# seed=<s> t=<t> spec=<hash>` comment.
void write_ensemble_csv(std::ostream& out, const TrajectoryEnsemble& ensemble);

/// Stable 64-bit FNV-1a hash of the Hamiltonian parameters, hex encoded.
std::string spec_hash(const HamiltonianSpec& spec);

}  // namespace fockbarrier
