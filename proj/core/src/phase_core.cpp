#include "fockbarrier/phase_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "fockbarrier/errors.hpp"

namespace fockbarrier {

ComplexAmplitude amplitude_from_phase(double q_mean, double p_mean) {
  return ComplexAmplitude(q_mean, p_mean) / std::numbers::sqrt2;
}

double mean_position(ComplexAmplitude alpha) { return std::numbers::sqrt2 * alpha.real(); }
double mean_momentum(ComplexAmplitude alpha) { return std::numbers::sqrt2 * alpha.imag(); }

UniformAxis::UniformAxis(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw ParameterError("axis bounds must be finite with lo < hi");
  }
  if (n < 2) throw ParameterError("axis needs at least two nodes");
}

double UniformAxis::node(std::size_t i) const noexcept {
  // Endpoint exact so symmetric axes hit 0 and +-hi without drift.
  if (i + 1 == n_) return hi_;
  return lo_ + static_cast<double>(i) * step();
}

std::vector<double> UniformAxis::nodes() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = node(i);
  return out;
}

std::size_t UniformAxis::index_of(double x) const noexcept {
  const double h = step();
  const double s = (x - lo_) / h;
  const double r = std::round(s);
  if (r < 0.0 || r > static_cast<double>(n_ - 1)) return npos;
  if (std::abs(s - r) > 1e-9) return npos;
  return static_cast<std::size_t>(r);
}

PhaseGrid::PhaseGrid(UniformAxis q_axis, UniformAxis p_axis)
    : q_(std::move(q_axis)), p_(std::move(p_axis)) {}

PhaseGrid::PhaseGrid(double q_min, double q_max, std::size_t n_q, double p_min, double p_max,
                     std::size_t n_p)
    : q_(q_min, q_max, n_q), p_(p_min, p_max, n_p) {}

PhaseGrid PhaseGrid::square(double half_width, std::size_t n) {
  return PhaseGrid(-half_width, half_width, n, -half_width, half_width, n);
}

void PhaseGrid::set_values(std::vector<double> values) {
  if (values.size() != n_q() * n_p()) {
    throw UsageError("grid values length " + std::to_string(values.size()) + " != " +
                     std::to_string(n_q() * n_p()));
  }
  values_ = std::move(values);
}

PhaseGrid PhaseGrid::with_values(std::vector<double> values) const {
  PhaseGrid out(q_, p_);
  out.set_values(std::move(values));
  return out;
}

PhaseGrid PhaseGrid::sampled(const std::function<double(PhasePoint)>& f) const {
  std::vector<double> v(n_q() * n_p());
  for (std::size_t i = 0; i < n_q(); ++i) {
    for (std::size_t j = 0; j < n_p(); ++j) v[i * n_p() + j] = f(point(i, j));
  }
  return with_values(std::move(v));
}

Region::Region(Kind kind, std::function<bool(PhasePoint)> inside, double q1, double q2)
    : kind_(kind), inside_(std::move(inside)), q1_(q1), q2_(q2) {}

Region Region::all() {
  return Region(Kind::All, [](PhasePoint) { return true; },
                -std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity());
}

Region Region::q_above(double q1) {
  return q_interval(q1, std::numeric_limits<double>::infinity());
}

Region Region::q_interval(double q1, double q2) {
  if (!(q1 < q2)) throw ParameterError("q interval needs q1 < q2");
  return Region(Kind::QInterval, [q1, q2](PhasePoint pt) { return pt.q > q1 && pt.q < q2; },
                q1, q2);
}

Region Region::predicate(std::function<bool(PhasePoint)> inside, Kind kind) {
  if (!inside) throw UsageError("region predicate is empty");
  return Region(kind, std::move(inside), -std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity());
}

bool Region::contains(PhasePoint pt) const { return inside_(pt); }

std::vector<double> simpson_weights(std::size_t n, double h) {
  if (n < 2) throw UsageError("quadrature needs at least two samples");
  std::vector<double> w(n, 0.0);
  const std::size_t intervals = n - 1;
  if (intervals == 1) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  // Simpson over an even number of intervals, 3/8 rule over the last three
  // when the count is odd.
  const std::size_t simpson_intervals = intervals % 2 == 0 ? intervals : intervals - 3;
  for (std::size_t k = 0; k < simpson_intervals; k += 2) {
    w[k] += h / 3.0;
    w[k + 1] += 4.0 * h / 3.0;
    w[k + 2] += h / 3.0;
  }
  if (simpson_intervals != intervals) {
    const std::size_t k = simpson_intervals;
    w[k] += 3.0 * h / 8.0;
    w[k + 1] += 9.0 * h / 8.0;
    w[k + 2] += 9.0 * h / 8.0;
    w[k + 3] += 3.0 * h / 8.0;
  }
  return w;
}

double integrate_1d(std::span<const double> samples, double h) {
  const auto w = simpson_weights(samples.size(), h);
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) sum += w[i] * samples[i];
  return sum;
}

double integrate_1d_interval(std::span<const double> samples, const UniformAxis& axis,
                             double a, double b) {
  if (samples.size() != axis.size()) throw UsageError("sample count does not match the axis");
  if (samples.size() < 2) throw UsageError("quadrature needs at least two samples");
  a = std::clamp(a, axis.lo(), axis.hi());
  b = std::clamp(b, axis.lo(), axis.hi());
  if (b <= a) return 0.0;
  const double h = axis.step();
  // Simpson over the nodes inside [a, b], then the two end pieces by linear
  // interpolation between the neighbouring nodes.
  const double fa = (a - axis.lo()) / h;
  const double fb = (b - axis.lo()) / h;
  const auto first = static_cast<std::size_t>(std::ceil(fa - 1e-9));
  const auto last = std::min(static_cast<std::size_t>(std::floor(fb + 1e-9)), samples.size() - 1);
  auto value_at = [&](double f) {
    const auto i = std::min(static_cast<std::size_t>(std::floor(f)), samples.size() - 2);
    const double s = f - static_cast<double>(i);
    return (1.0 - s) * samples[i] + s * samples[i + 1];
  };
  if (first > last) return 0.5 * (value_at(fa) + value_at(fb)) * (b - a);
  double sum = 0.0;
  if (last > first) sum += integrate_1d(samples.subspan(first, last - first + 1), h);
  const double x_first = axis.node(first);
  const double x_last = axis.node(last);
  if (x_first > a) sum += 0.5 * (value_at(fa) + samples[first]) * (x_first - a);
  if (b > x_last) sum += 0.5 * (samples[last] + value_at(fb)) * (b - x_last);
  return sum;
}

namespace {

void require_values(const PhaseGrid& grid) {
  if (!grid.has_values()) throw UsageError("grid has no field values to integrate");
}

}  // namespace

double integrate_2d(const PhaseGrid& grid) {
  require_values(grid);
  const auto wq = simpson_weights(grid.n_q(), grid.q_axis().step());
  const auto wp = simpson_weights(grid.n_p(), grid.p_axis().step());
  const auto v = grid.values();
  double total = 0.0;
  for (std::size_t i = 0; i < grid.n_q(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < grid.n_p(); ++j) row += wp[j] * v[i * grid.n_p() + j];
    total += wq[i] * row;
  }
  return total;
}

std::vector<double> region_fractions(const PhaseGrid& grid, const Region& region,
                                     int subsamples) {
  const std::size_t nq = grid.n_q();
  const std::size_t np = grid.n_p();
  const double hq = grid.q_axis().step();
  const double hp = grid.p_axis().step();
  std::vector<double> frac(nq * np, 0.0);
  for (std::size_t i = 0; i < nq; ++i) {
    for (std::size_t j = 0; j < np; ++j) {
      const PhasePoint c = grid.point(i, j);
      const bool centre = region.contains(c);
      // Cells whose corners and edge midpoints agree with the centre are
      // taken as fully in or out.
      bool uniform = true;
      for (int dq : {-1, 0, 1}) {
        for (int dp : {-1, 0, 1}) {
          if ((dq != 0 || dp != 0) &&
              region.contains({c.q + 0.5 * dq * hq, c.p + 0.5 * dp * hp}) != centre) {
            uniform = false;
          }
        }
      }
      if (uniform) {
        frac[i * np + j] = centre ? 1.0 : 0.0;
        continue;
      }
      // Twice as many p offsets as q offsets: no subsample then lies on the
      // axes or diagonals through the node, where level sets like
      // p^2 = q^2 would otherwise tie on a whole row of subsamples.
      int hits = 0;
      for (int a = 0; a < subsamples; ++a) {
        for (int b = 0; b < 2 * subsamples; ++b) {
          const double sq = ((a + 0.5) / subsamples - 0.5) * hq;
          const double sp = ((b + 0.5) / (2 * subsamples) - 0.5) * hp;
          if (region.contains({c.q + sq, c.p + sp})) ++hits;
        }
      }
      frac[i * np + j] = static_cast<double>(hits) / (2 * subsamples * subsamples);
    }
  }
  return frac;
}

double integrate_region(const PhaseGrid& grid, const Region& region) {
  require_values(grid);
  const std::size_t nq = grid.n_q();
  const std::size_t np = grid.n_p();
  const auto v = grid.values();
  switch (region.kind()) {
    case Region::Kind::All:
      return integrate_2d(grid);
    case Region::Kind::QInterval: {
      const auto wp = simpson_weights(np, grid.p_axis().step());
      std::vector<double> marginal(nq, 0.0);
      for (std::size_t i = 0; i < nq; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < np; ++j) row += wp[j] * v[i * np + j];
        marginal[i] = row;
      }
      return integrate_1d_interval(marginal, grid.q_axis(), region.q_lower(), region.q_upper());
    }
    case Region::Kind::LevelSet:
    case Region::Kind::RightLobe:
      break;
  }
  // Level sets cut the Simpson pattern irregularly (its alternating weights
  // do not average out along a boundary), so these use uniform cell weights,
  // halved on the grid edges, times the fraction of each cell inside.
  const double hq = grid.q_axis().step();
  const double hp = grid.p_axis().step();
  const auto frac = region_fractions(grid, region);
  double total = 0.0;
  for (std::size_t i = 0; i < nq; ++i) {
    const double wi = (i == 0 || i + 1 == nq) ? 0.5 : 1.0;
    double row = 0.0;
    for (std::size_t j = 0; j < np; ++j) {
      const double wj = (j == 0 || j + 1 == np) ? 0.5 : 1.0;
      row += wj * frac[i * np + j] * v[i * np + j];
    }
    total += wi * row;
  }
  return total * hq * hp;
}

}  // namespace fockbarrier
