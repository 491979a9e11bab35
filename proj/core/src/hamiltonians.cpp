#include "fockbarrier/hamiltonians.hpp"

#include <boost/math/special_functions/laguerre.hpp>
#include <cmath>
#include <numbers>

#include "fockbarrier/errors.hpp"

namespace fockbarrier {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::InvertedOscillator:
      return "inverted-oscillator";
    case ModelKind::KerrInverted:
      return "kerr";
  }
  return "unknown";
}

HamiltonianSpec HamiltonianSpec::inverted_oscillator(int n_max) {
  return HamiltonianSpec{ModelKind::InvertedOscillator, 0.5, 0.0, n_max};
}

HamiltonianSpec HamiltonianSpec::kerr(double epsilon2, double kerr_K, int n_max) {
  return HamiltonianSpec{ModelKind::KerrInverted, epsilon2, kerr_K, n_max};
}

double HamiltonianSpec::drive() const noexcept {
  return kind == ModelKind::InvertedOscillator ? 0.5 : epsilon2;
}

double HamiltonianSpec::kerr() const noexcept {
  return kind == ModelKind::InvertedOscillator ? 0.0 : kerr_K;
}

void HamiltonianSpec::validate() const {
  if (n_max < 1) throw ParameterError("n_max must be >= 1");
  if (!std::isfinite(epsilon2)) throw ParameterError("epsilon2 must be finite");
  if (!(kerr_K >= 0.0) || !std::isfinite(kerr_K)) throw ParameterError("kerr_K must be >= 0");
  if (kind == ModelKind::KerrInverted && !(kerr_K > 0.0)) {
    throw ParameterError("Kerr model needs kerr_K > 0");
  }
}

FockState fock_state(int n, int n_max) {
  if (n < 0 || n > n_max) throw ParameterError("Fock index outside the basis");
  FockState s{Eigen::VectorXcd::Zero(n_max + 1)};
  s.coeffs(n) = 1.0;
  return s;
}

OperatorMatrix build_operator(const HamiltonianSpec& spec) {
  spec.validate();
  const auto d = static_cast<Eigen::Index>(spec.dim());
  const double eps = spec.drive();
  const double K = spec.kerr();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index n = 0; n + 2 < d; ++n) {
    const double v = -eps * std::sqrt(static_cast<double>((n + 1) * (n + 2)));
    h(n, n + 2) = v;
    h(n + 2, n) = v;
  }
  if (K != 0.0) {
    for (Eigen::Index n = 0; n < d; ++n) h(n, n) = K * static_cast<double>(n * (n - 1));
  }
  return OperatorMatrix{std::move(h)};
}

Eigen::VectorXcd apply_hamiltonian(const HamiltonianSpec& spec, const FockState& state) {
  const double eps = spec.drive();
  const double K = spec.kerr();
  const Eigen::Index d = state.coeffs.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(d + 2);
  for (Eigen::Index n = 0; n < d; ++n) {
    const std::complex<double> c = state.coeffs(n);
    if (c == 0.0) continue;
    const double nd = static_cast<double>(n);
    // a^+2 |n> = sqrt((n+1)(n+2)) |n+2>, a^2 |n> = sqrt(n(n-1)) |n-2>
    out(n + 2) += -eps * std::sqrt((nd + 1.0) * (nd + 2.0)) * c;
    if (n >= 2) out(n - 2) += -eps * std::sqrt(nd * (nd - 1.0)) * c;
    out(n) += K * nd * (nd - 1.0) * c;
  }
  return out;
}

double classical_hamiltonian(const HamiltonianSpec& spec, PhasePoint pt) {
  const double eps = spec.drive();
  const double K = spec.kerr();
  const double r2 = pt.q * pt.q + pt.p * pt.p;
  return eps * (pt.p * pt.p - pt.q * pt.q) + 0.25 * K * r2 * r2;
}

PhasePoint hamiltonian_gradient(const HamiltonianSpec& spec, PhasePoint pt) {
  const double eps = spec.drive();
  const double K = spec.kerr();
  const double r2 = pt.q * pt.q + pt.p * pt.p;
  return {-2.0 * eps * pt.q + K * r2 * pt.q, 2.0 * eps * pt.p + K * r2 * pt.p};
}

std::complex<double> displacement_element(ComplexAmplitude alpha, int m, int n) {
  if (m < 0 || n < 0) throw ParameterError("Fock indices must be non-negative");
  const double x = std::norm(alpha);
  const int lo = std::min(m, n);
  const int k = std::abs(m - n);
  // m >= n: sqrt(n!/m!) alpha^(m-n) e^{-|a|^2/2} L_n^(m-n)(|a|^2)
  // m <  n: sqrt(m!/n!) (-alpha*)^(n-m) e^{-|a|^2/2} L_m^(n-m)(|a|^2)
  const double lag = boost::math::laguerre(static_cast<unsigned>(lo), static_cast<unsigned>(k), x);
  if (k == 0) return std::exp(-0.5 * x) * lag;
  if (x == 0.0) return 0.0;
  const ComplexAmplitude base = m >= n ? alpha : -std::conj(alpha);
  const double log_mag = 0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + k + 1.0)) +
                         k * std::log(std::abs(base)) - 0.5 * x;
  const double phase = k * std::arg(base);
  return std::polar(std::exp(log_mag), phase) * lag;
}

FockState displaced_fock(ComplexAmplitude alpha, int n, int n_max, double max_deficit) {
  if (n_max < 1) throw ParameterError("n_max must be >= 1");
  if (n < 0 || n > n_max) throw ParameterError("Fock index outside the basis");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw ParameterError("displacement must be finite");
  }
  FockState s{Eigen::VectorXcd(n_max + 1)};
  for (int m = 0; m <= n_max; ++m) s.coeffs(m) = displacement_element(alpha, m, n);
  const double norm2 = s.coeffs.squaredNorm();
  const double deficit = 1.0 - norm2;
  if (deficit > max_deficit) {
    throw TruncationError("displaced Fock state loses " + std::to_string(deficit) +
                              " of its norm at n_max = " + std::to_string(n_max),
                          deficit);
  }
  s.coeffs /= std::sqrt(norm2);
  return s;
}

double mean_energy(const HamiltonianSpec& spec, const FockState& state) {
  const Eigen::VectorXcd h = apply_hamiltonian(spec, state);
  return state.coeffs.dot(h.head(state.coeffs.size())).real();
}

double displaced_fock_energy(const HamiltonianSpec& spec, ComplexAmplitude alpha, int n) {
  const double eps = spec.drive();
  const double K = spec.kerr();
  const double re2 = alpha.real() * alpha.real();
  const double im2 = alpha.imag() * alpha.imag();
  const double a2 = re2 + im2;
  const double nd = n;
  return -2.0 * eps * (re2 - im2) + K * (a2 * a2 + nd * (nd - 1.0) + 4.0 * nd * a2);
}

double tail_mass(const FockState& state, double fraction) {
  const Eigen::Index d = state.coeffs.size();
  const auto start = static_cast<Eigen::Index>(std::floor((1.0 - fraction) * d));
  return state.coeffs.tail(d - start).squaredNorm();
}

double energy_variance(const HamiltonianSpec& spec, const FockState& state, double max_tail) {
  const double tail = tail_mass(state);
  if (tail > max_tail) {
    throw TruncationError("Fock tail mass " + std::to_string(tail) +
                              " too large for an energy variance",
                          tail);
  }
  const Eigen::VectorXcd h = apply_hamiltonian(spec, state);
  const double mean = state.coeffs.dot(h.head(state.coeffs.size())).real();
  const double second = h.squaredNorm();
  return std::sqrt(std::max(0.0, second - mean * mean));
}

std::vector<PhasePoint> Separatrix::sample(std::size_t n_per_lobe) const {
  std::vector<PhasePoint> pts;
  if (n_per_lobe < 2) return pts;
  pts.reserve(2 * n_per_lobe);
  const double quarter = std::numbers::pi / 4.0;
  for (int lobe = 0; lobe < 2; ++lobe) {
    const double centre = lobe == 0 ? 0.0 : std::numbers::pi;
    for (std::size_t k = 0; k < n_per_lobe; ++k) {
      const double phi =
          centre - quarter + 2.0 * quarter * static_cast<double>(k) / (n_per_lobe - 1);
      const double r = std::sqrt(std::max(0.0, 4.0 * epsilon2 * std::cos(2.0 * phi) / kerr_K));
      pts.push_back({r * std::cos(phi), r * std::sin(phi)});
    }
  }
  return pts;
}

bool Separatrix::on_curve(PhasePoint pt, double tol) const {
  const double r2 = pt.q * pt.q + pt.p * pt.p;
  const double h = epsilon2 * (pt.p * pt.p - pt.q * pt.q) + 0.25 * kerr_K * r2 * r2;
  return std::abs(h - energy) <= tol;
}

Separatrix separatrix(const HamiltonianSpec& spec) {
  if (spec.kind != ModelKind::KerrInverted || !(spec.kerr_K > 0.0)) {
    throw UnsupportedError(
        "no closed separatrix without Kerr term; inverted-oscillator separatrices are the lines "
        "p = +q and p = -q");
  }
  Separatrix s;
  s.epsilon2 = spec.epsilon2;
  s.kerr_K = spec.kerr_K;
  s.well_q = std::sqrt(2.0 * spec.epsilon2 / spec.kerr_K);
  s.well_energy = -spec.epsilon2 * spec.epsilon2 / spec.kerr_K;
  s.outer_q = std::sqrt(4.0 * spec.epsilon2 / spec.kerr_K);
  return s;
}

Region energy_above(const HamiltonianSpec& spec, double e_c) {
  return Region::predicate(
      [spec, e_c](PhasePoint pt) { return classical_hamiltonian(spec, pt) > e_c; },
      Region::Kind::LevelSet);
}

Region right_lobe(const HamiltonianSpec& spec) {
  if (spec.kind != ModelKind::KerrInverted || !(spec.kerr_K > 0.0)) {
    throw UnsupportedError("the forbidden right lobe exists only for K > 0");
  }
  return Region::predicate(
      [spec](PhasePoint pt) { return pt.q > 0.0 && classical_hamiltonian(spec, pt) < 0.0; },
      Region::Kind::RightLobe);
}

}  // namespace fockbarrier
