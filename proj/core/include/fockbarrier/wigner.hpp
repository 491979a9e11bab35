#pragma once

// Wigner functions of pure states and the phase-space diagnostics built on
// them: marginals, region probabilities, negativity, forbidden-lobe volume,
// fringe counts and transmission plateaus.

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "fockbarrier/exact_evolution.hpp"
#include "fockbarrier/hamiltonians.hpp"
#include "fockbarrier/phase_core.hpp"
#include "fockbarrier/series.hpp"

namespace fockbarrier {

struct WignerField {
  PhaseGrid grid;
  double time = 0.0;
  std::string source;
};

/// W(q, p) = (1/pi) Int psi(q+y) psi*(q-y) e^{2ipy} dy on the wavefunction's
/// q nodes. The y integral is a trapezoid sum with step h over node pairs
/// (q_j + kh, q_j - kh), evaluated for all p at once as a real matrix product.
/// psi is taken as zero outside the axis.
WignerField wigner_from_wavefunction(const WavefunctionGrid& wf, const UniformAxis& p_axis,
                                     double time = 0.0, std::string source = {});

/// Synthesises psi on the grid's q axis, then calls wigner_from_wavefunction.
/// Throws DomainError when the state does not fit inside the q axis.
WignerField wigner_from_state(const FockState& state, const PhaseGrid& grid_spec,
                              double time = 0.0, std::string source = {},
                              double boundary_tolerance = 1e-8);

/// P(q) = Int W dp on each q node.
std::vector<double> marginal_q(const WignerField& field);

/// Int_{q1}^{q2} Int W dp dq.
double transmission_wigner(const WignerField& field, double q1 = 0.0,
                           double q2 = std::numeric_limits<double>::infinity());

/// Initial Wigner mass on {H(q, p) > e_c}. This is a semiclassical reference
/// (classical step function, not the Weyl symbol of the projector).
double positive_energy_fraction(const WignerField& field, const HamiltonianSpec& spec,
                                double e_c = 0.0);

/// Values with |W| below this floor count as zero in negativity.
inline constexpr double kNegativityFloor = 1e-8;

struct NegativityReport {
  double delta = 0.0;
  double time = 0.0;
};

/// delta = Int (|W| - W) over a bicubic (Catmull-Rom) interpolant of the
/// grid; values above -kNegativityFloor count as zero.
NegativityReport negativity(const WignerField& field);

/// Int_{Omega_r} |W| with Omega_r = {H < 0, q > 0}. Throws UnsupportedError for K = 0.
double forbidden_volume(const WignerField& field, const HamiltonianSpec& spec);

struct FringeReport {
  int n_sign_changes = 0;
  double time = 0.0;
};

/// Sign alternations of W(q, 0) across q nodes inside Omega_r, ignoring nodes
/// with |W| <= relative_threshold * max |W(., 0)|. Needs p = 0 on the p axis.
FringeReport fringe_count(const WignerField& field, const HamiltonianSpec& spec,
                          double relative_threshold = 1e-6);

/// Sign changes of an arbitrary slice restricted to `inside`; exposed for
/// synthetic-field checks.
int count_sign_changes(const std::vector<double>& q_nodes, const std::vector<double>& values,
                       const std::vector<bool>& inside, double relative_threshold);

struct PlateauOptions {
  double threshold = 0.05;
  std::size_t min_samples = 3;
};

struct PlateauInterval {
  double start = 0.0;
  double end = 0.0;
  std::size_t first = 0;
  std::size_t last = 0;

  /// True unless the interval touches either end of the series.
  bool interior(std::size_t series_size) const noexcept {
    return first > 0 && last + 1 < series_size;
  }
};

/// Maximal runs where |dP/dt| (central differences) <= threshold * max |dP/dt|
/// lasting at least min_samples samples. Throws UsageError for fewer than five
/// samples or a non-uniform time step.
std::vector<PlateauInterval> detect_plateaus(const TransmissionSeries& series,
                                             const PlateauOptions& options = {});

/// Text dump: `# wigner t=<t> qmin qmax pmin pmax nq np` then `q p W` rows,
/// keeping every `stride`-th node on each axis (endpoints kept when they fall
/// on the stride).
void write_wigner_dump(std::ostream& out, const WignerField& field, std::size_t stride = 1);
WignerField read_wigner_dump(std::istream& in);

}  // namespace fockbarrier
