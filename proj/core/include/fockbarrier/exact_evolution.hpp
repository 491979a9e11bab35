#pragma once

// Exact unitary evolution by spectral factorisation of the truncated
// Hamiltonian, and synthesis of position-space wavefunctions from Fock
// coefficients via normalised Hermite functions.

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <vector>

#include "fockbarrier/hamiltonians.hpp"
#include "fockbarrier/phase_core.hpp"

namespace fockbarrier {

enum class TruncationPolicy { Lenient, Strict };

/// exp(-i H t) through H = V diag(lambda) V^T.
class Propagator {
 public:
  Propagator(HamiltonianSpec spec, Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors);

  const HamiltonianSpec& spec() const noexcept { return spec_; }
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const noexcept { return eigenvectors_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(eigenvalues_.size()); }

 private:
  HamiltonianSpec spec_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

/// Throws NumericError if the eigensolver does not converge.
Propagator make_propagator(const HamiltonianSpec& spec);

/// Tail mass (top 10% of the basis) above which evolution is untrusted.
inline constexpr double kEvolutionTailLimit = 1e-6;

/// psi(t) = V exp(-i Lambda t) V^T psi(0). Under the strict policy a tail
/// mass above kEvolutionTailLimit throws TruncationError.
FockState evolve(const Propagator& prop, const FockState& state, double t,
                 TruncationPolicy policy = TruncationPolicy::Lenient);

/// Normalised Hermite functions phi_n(q) for n = 0..n_max, one row per node.
/// Upward recurrence phi_{n+1} = sqrt(2/(n+1)) q phi_n - sqrt(n/(n+1)) phi_{n-1}.
Eigen::MatrixXd hermite_functions(int n_max, const UniformAxis& q_axis);

/// psi(q) sampled on uniform nodes.
struct WavefunctionGrid {
  UniformAxis q_axis;
  std::vector<std::complex<double>> psi;

  /// |psi(q)|^2 per node.
  std::vector<double> density() const;
  /// Largest |psi| at the two end nodes.
  double boundary_amplitude() const;
  /// Simpson integral of |psi|^2 over the axis.
  double norm_on_grid() const;
};

/// Caches the Hermite matrix for repeated synthesis on a fixed axis.
class WavefunctionSynthesizer {
 public:
  WavefunctionSynthesizer(int n_max, UniformAxis q_axis,
                          double boundary_tolerance = 1e-8);

  /// Throws DomainError when |psi| at either end node exceeds the tolerance.
  WavefunctionGrid operator()(const FockState& state) const;
  /// Same synthesis without the boundary check.
  WavefunctionGrid unchecked(const FockState& state) const;

  int n_max() const noexcept { return n_max_; }
  const UniformAxis& q_axis() const noexcept { return axis_; }
  double boundary_tolerance() const noexcept { return tol_; }

 private:
  int n_max_;
  UniformAxis axis_;
  double tol_;
  Eigen::MatrixXd basis_;
};

WavefunctionGrid wavefunction_on_grid(const FockState& state, const UniformAxis& q_axis,
                                      double boundary_tolerance = 1e-8);

/// Integral of |psi|^2 over (q1, q2) by 1-D Simpson; the bounds are clamped
/// to the grid, so infinite bounds integrate to the domain edges.
double transmission_marginal(const WavefunctionGrid& wf, double q1 = 0.0,
                             double q2 = std::numeric_limits<double>::infinity());

/// <q> and <p> from Fock coefficients.
double expectation_position(const FockState& state);
double expectation_momentum(const FockState& state);

}  // namespace fockbarrier
