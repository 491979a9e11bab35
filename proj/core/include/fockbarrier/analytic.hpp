#pragma once

// Closed-form inverted-oscillator baselines: the hyperbolic classical flow,
// the Liouville-transported coherent Wigner function and its error-function
// transmission law.

#include "fockbarrier/phase_core.hpp"

namespace fockbarrier {

/// Coherent state centred at (q0, p0) = (sqrt2 Re alpha, sqrt2 Im alpha).
struct CoherentIOBenchmark {
  double q0 = 0.0;
  double p0 = 0.0;

  static CoherentIOBenchmark from_alpha(ComplexAmplitude alpha);
};

/// (q cosh t + p sinh t, p cosh t + q sinh t).
PhasePoint io_flow(PhasePoint pt, double t);

/// W(q, p, t) = W0(flow(q, p, -t)), W0 the coherent Gaussian.
double coherent_wigner_t(const CoherentIOBenchmark& bench, double q, double p, double t);

/// c(t) = (q0 cosh t + p0 sinh t) / sqrt(cosh^2 t + sinh^2 t).
double transmission_argument(const CoherentIOBenchmark& bench, double t);

/// P(q > 0, t) = (1 - erf(-c(t))) / 2.
double coherent_transmission(const CoherentIOBenchmark& bench, double t);

/// t -> infinity limit (1 - erf(-(q0 + p0)/sqrt2)) / 2.
double coherent_transmission_limit(const CoherentIOBenchmark& bench);

}  // namespace fockbarrier
