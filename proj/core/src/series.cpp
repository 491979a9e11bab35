#include "fockbarrier/series.hpp"

#include <cmath>

#include "fockbarrier/errors.hpp"

namespace fockbarrier {

std::string to_string(SeriesMethod method) {
  switch (method) {
    case SeriesMethod::Twa:
      return "twa";
    case SeriesMethod::Exact:
      return "exact";
    case SeriesMethod::Analytic:
      return "analytic";
  }
  return "unknown";
}

std::vector<double> time_grid(double t_max, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("time step must be positive");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ParameterError("t_max must be positive");
  const double steps = t_max / dt;
  const auto n = static_cast<std::size_t>(std::llround(steps));
  if (n == 0 || std::abs(steps - static_cast<double>(n)) > 1e-9 * steps) {
    throw ParameterError("t_max must be a whole number of time steps");
  }
  std::vector<double> t(n + 1);
  for (std::size_t i = 0; i <= n; ++i) t[i] = static_cast<double>(i) * dt;
  t[n] = t_max;
  return t;
}

}  // namespace fockbarrier
