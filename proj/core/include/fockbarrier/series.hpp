#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fockbarrier {

enum class SeriesMethod { Twa, Exact, Analytic };

std::string to_string(SeriesMethod method);

/// Time-stamped transmission estimates P(q > q1, t). `sigma` is the binomial
/// standard error for TWA series and zero for deterministic tracks.
struct TransmissionSeries {
  SeriesMethod method = SeriesMethod::Exact;
  std::vector<double> times;
  std::vector<double> estimates;
  std::vector<double> sigma;

  std::size_t size() const noexcept { return times.size(); }
  void push(double t, double p, double s = 0.0) {
    times.push_back(t);
    estimates.push_back(p);
    sigma.push_back(s);
  }
};

/// n + 1 equally spaced times 0, dt, ..., t_max (the last one clamped to t_max).
std::vector<double> time_grid(double t_max, double dt);

}  // namespace fockbarrier
