#include "fockbarrier/analytic.hpp"

#include <cmath>
#include <numbers>

namespace fockbarrier {

CoherentIOBenchmark CoherentIOBenchmark::from_alpha(ComplexAmplitude alpha) {
  return {mean_position(alpha), mean_momentum(alpha)};
}

PhasePoint io_flow(PhasePoint pt, double t) {
  const double c = std::cosh(t);
  const double s = std::sinh(t);
  return {pt.q * c + pt.p * s, pt.p * c + pt.q * s};
}

double coherent_wigner_t(const CoherentIOBenchmark& bench, double q, double p, double t) {
  const PhasePoint back = io_flow({q, p}, -t);
  const double dq = back.q - bench.q0;
  const double dp = back.p - bench.p0;
  return std::exp(-dq * dq - dp * dp) / std::numbers::pi;
}

double transmission_argument(const CoherentIOBenchmark& bench, double t) {
  const double c = std::cosh(t);
  const double s = std::sinh(t);
  // Divide through by cosh to stay finite for large t.
  const double th = s / c;
  return (bench.q0 + bench.p0 * th) / std::sqrt(1.0 + th * th);
}

double coherent_transmission(const CoherentIOBenchmark& bench, double t) {
  return 0.5 * std::erfc(-transmission_argument(bench, t));
}

double coherent_transmission_limit(const CoherentIOBenchmark& bench) {
  return 0.5 * std::erfc(-(bench.q0 + bench.p0) / std::numbers::sqrt2);
}

}  // namespace fockbarrier
