#include "fockbarrier/exact_evolution.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "fockbarrier/errors.hpp"

namespace fockbarrier {

Propagator::Propagator(HamiltonianSpec spec, Eigen::VectorXd eigenvalues,
                       Eigen::MatrixXd eigenvectors)
    : spec_(spec), eigenvalues_(std::move(eigenvalues)), eigenvectors_(std::move(eigenvectors)) {}

Propagator make_propagator(const HamiltonianSpec& spec) {
  const OperatorMatrix h = build_operator(spec);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.entries);
  if (solver.info() != Eigen::Success) {
    throw NumericError("symmetric eigensolver failed for " + to_string(spec.kind) +
                       " at n_max = " + std::to_string(spec.n_max));
  }
  return Propagator(spec, solver.eigenvalues(), solver.eigenvectors());
}

FockState evolve(const Propagator& prop, const FockState& state, double t,
                 TruncationPolicy policy) {
  if (!std::isfinite(t)) throw ParameterError("evolution time must be finite");
  if (static_cast<std::size_t>(state.coeffs.size()) != prop.dim()) {
    throw UsageError("state dimension does not match the propagator basis");
  }
  if (t == 0.0) return state;
  const Eigen::MatrixXd& v = prop.eigenvectors();
  Eigen::VectorXcd modes = v.transpose().cast<std::complex<double>>() * state.coeffs;
  for (Eigen::Index k = 0; k < modes.size(); ++k) {
    modes(k) *= std::polar(1.0, -prop.eigenvalues()(k) * t);
  }
  FockState out{v.cast<std::complex<double>>() * modes};
  if (policy == TruncationPolicy::Strict) {
    const double tail = tail_mass(out);
    if (tail > kEvolutionTailLimit) {
      throw TruncationError("evolved state at t = " + std::to_string(t) + " has Fock tail mass " +
                                std::to_string(tail) + " (n_max = " +
                                std::to_string(prop.spec().n_max) + ")",
                            tail);
    }
  }
  return out;
}

Eigen::MatrixXd hermite_functions(int n_max, const UniformAxis& q_axis) {
  const auto nq = static_cast<Eigen::Index>(q_axis.size());
  Eigen::MatrixXd phi(nq, n_max + 1);
  const double norm0 = std::pow(std::numbers::pi, -0.25);
  for (Eigen::Index i = 0; i < nq; ++i) {
    const double q = q_axis.node(static_cast<std::size_t>(i));
    phi(i, 0) = norm0 * std::exp(-0.5 * q * q);
    if (n_max >= 1) phi(i, 1) = std::numbers::sqrt2 * q * phi(i, 0);
    for (int n = 1; n < n_max; ++n) {
      phi(i, n + 1) = std::sqrt(2.0 / (n + 1)) * q * phi(i, n) -
                      std::sqrt(static_cast<double>(n) / (n + 1)) * phi(i, n - 1);
    }
  }
  return phi;
}

std::vector<double> WavefunctionGrid::density() const {
  std::vector<double> d(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) d[i] = std::norm(psi[i]);
  return d;
}

double WavefunctionGrid::boundary_amplitude() const {
  if (psi.empty()) return 0.0;
  return std::max(std::abs(psi.front()), std::abs(psi.back()));
}

double WavefunctionGrid::norm_on_grid() const { return integrate_1d(density(), q_axis.step()); }

WavefunctionSynthesizer::WavefunctionSynthesizer(int n_max, UniformAxis q_axis,
                                                 double boundary_tolerance)
    : n_max_(n_max),
      axis_(std::move(q_axis)),
      tol_(boundary_tolerance),
      basis_(hermite_functions(n_max, axis_)) {}

WavefunctionGrid WavefunctionSynthesizer::unchecked(const FockState& state) const {
  if (state.n_max() != n_max_) throw UsageError("state basis does not match synthesizer");
  const Eigen::VectorXcd psi = basis_.cast<std::complex<double>>() * state.coeffs;
  return WavefunctionGrid{axis_, std::vector<std::complex<double>>(psi.data(), psi.data() + psi.size())};
}

WavefunctionGrid WavefunctionSynthesizer::operator()(const FockState& state) const {
  WavefunctionGrid wf = unchecked(state);
  const double edge = wf.boundary_amplitude();
  if (edge > tol_) {
    throw DomainError("wavefunction reaches the grid boundary: |psi| = " + std::to_string(edge) +
                      " on [" + std::to_string(axis_.lo()) + ", " + std::to_string(axis_.hi()) +
                      "]");
  }
  return wf;
}

WavefunctionGrid wavefunction_on_grid(const FockState& state, const UniformAxis& q_axis,
                                      double boundary_tolerance) {
  return WavefunctionSynthesizer(state.n_max(), q_axis, boundary_tolerance)(state);
}

double transmission_marginal(const WavefunctionGrid& wf, double q1, double q2) {
  return integrate_1d_interval(wf.density(), wf.q_axis, q1, q2);
}

namespace {

// <a> = sum_n sqrt(n) conj(c_{n-1}) c_n
std::complex<double> expectation_lowering(const FockState& state) {
  std::complex<double> sum = 0.0;
  for (Eigen::Index n = 1; n < state.coeffs.size(); ++n) {
    sum += std::sqrt(static_cast<double>(n)) * std::conj(state.coeffs(n - 1)) * state.coeffs(n);
  }
  return sum;
}

}  // namespace

double expectation_position(const FockState& state) {
  return std::numbers::sqrt2 * expectation_lowering(state).real();
}

double expectation_momentum(const FockState& state) {
  return std::numbers::sqrt2 * expectation_lowering(state).imag();
}

}  // namespace fockbarrier
