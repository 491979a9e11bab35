#pragma once

// Inverted-oscillator and Kerr-inverted Hamiltonians: the quantum operator in
// a truncated Fock basis and the matching classical phase-space function.
//
//   inverted oscillator   H = (p^2 - q^2)/2 = -(a^+2 + a^2)/2
//   Kerr inverted         H = -eps2 (a^+2 + a^2) + K a^+2 a^2
//   classical Kerr        H(q,p) = eps2 (p^2 - q^2) + (K/4)(q^2 + p^2)^2

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "fockbarrier/phase_core.hpp"

namespace fockbarrier {

enum class ModelKind { InvertedOscillator, KerrInverted };

std::string to_string(ModelKind kind);

struct HamiltonianSpec {
  ModelKind kind = ModelKind::InvertedOscillator;
  double epsilon2 = 0.5;
  double kerr_K = 0.0;
  int n_max = 100;

  static HamiltonianSpec inverted_oscillator(int n_max = 100);
  static HamiltonianSpec kerr(double epsilon2, double kerr_K, int n_max = 100);

  /// Inverted oscillator is fixed at eps2 = 1/2 and K = 0 whatever the fields hold.
  double drive() const noexcept;
  double kerr() const noexcept;
  std::size_t dim() const noexcept { return static_cast<std::size_t>(n_max) + 1; }

  /// Throws ParameterError: n_max >= 1, K >= 0, Kerr kind needs K > 0.
  void validate() const;
};

/// Real symmetric Hamiltonian matrix in the Fock basis |0>..|n_max>.
struct OperatorMatrix {
  Eigen::MatrixXd entries;
  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries.rows()); }
};

/// Pure state as Fock coefficients c_0..c_{n_max}.
struct FockState {
  Eigen::VectorXcd coeffs;

  int n_max() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
  double norm() const { return coeffs.norm(); }
};

/// Fock |n> in a basis of size n_max + 1.
FockState fock_state(int n, int n_max);

OperatorMatrix build_operator(const HamiltonianSpec& spec);

/// H applied to `state` without truncation: the result has n_max + 3 entries,
/// since a^+2 lifts the top two levels out of the basis.
Eigen::VectorXcd apply_hamiltonian(const HamiltonianSpec& spec, const FockState& state);

double classical_hamiltonian(const HamiltonianSpec& spec, PhasePoint pt);
/// (dH/dq, dH/dp) at pt.
PhasePoint hamiltonian_gradient(const HamiltonianSpec& spec, PhasePoint pt);

/// <m|D(alpha)|n> from the associated-Laguerre closed form.
std::complex<double> displacement_element(ComplexAmplitude alpha, int m, int n);

/// D(alpha)|n> truncated to n_max and renormalised. Throws TruncationError
/// (carrying the deficit) if the truncated norm^2 is below 1 - max_deficit.
FockState displaced_fock(ComplexAmplitude alpha, int n, int n_max, double max_deficit = 1e-8);

/// <psi|H|psi> as a quadratic form.
double mean_energy(const HamiltonianSpec& spec, const FockState& state);

/// Mean energy of D(alpha)|n> in closed form:
/// -2 eps2 (Re^2 alpha - Im^2 alpha) + K (|alpha|^4 + n(n-1) + 4 n |alpha|^2).
double displaced_fock_energy(const HamiltonianSpec& spec, ComplexAmplitude alpha, int n);

/// sqrt(<H^2> - <H>^2). Throws TruncationError if the mass in the top 10% of
/// the basis exceeds max_tail.
double energy_variance(const HamiltonianSpec& spec, const FockState& state,
                       double max_tail = 1e-8);

/// Probability mass in the top `fraction` of the Fock basis.
double tail_mass(const FockState& state, double fraction = 0.1);

/// Zero-energy level set of the Kerr classical Hamiltonian. In polar form the
/// lemniscate r^2 = 4 eps2 cos(2 phi) / K.
struct Separatrix {
  double epsilon2 = 0.5;
  double kerr_K = 0.01;
  double energy = 0.0;
  /// Well minima at q = +-sqrt(2 eps2 / K), p = 0.
  double well_q = 0.0;
  double well_energy = 0.0;
  /// Outer crossings of the q axis at +-sqrt(4 eps2 / K).
  double outer_q = 0.0;

  /// Points on the curve, n per lobe, ordered around each lobe.
  std::vector<PhasePoint> sample(std::size_t n_per_lobe) const;
  bool on_curve(PhasePoint pt, double tol = 1e-9) const;
};

/// Throws UnsupportedError for the inverted oscillator (its separatrices
/// are the straight lines p = +-q).
Separatrix separatrix(const HamiltonianSpec& spec);

/// {H(q, p) > e_c}.
Region energy_above(const HamiltonianSpec& spec, double e_c = 0.0);
/// Classically forbidden right lobe {H < 0, q > 0}; needs K > 0.
Region right_lobe(const HamiltonianSpec& spec);

}  // namespace fockbarrier
