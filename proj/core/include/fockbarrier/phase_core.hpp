#pragma once

// Shared phase-space types: amplitudes, points, uniform grids, regions and
// composite Simpson quadrature. Units are hbar = m = omega = 1 throughout.

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace fockbarrier {

/// Displacement amplitude alpha = (q + i p) / sqrt(2).
using ComplexAmplitude = std::complex<double>;

ComplexAmplitude amplitude_from_phase(double q_mean, double p_mean);
/// Phase-space centre (sqrt(2) Re alpha, sqrt(2) Im alpha).
double mean_position(ComplexAmplitude alpha);
double mean_momentum(ComplexAmplitude alpha);

struct PhasePoint {
  double q = 0.0;
  double p = 0.0;

  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

/// Uniformly spaced nodes lo, lo + h, ..., hi (both ends included).
class UniformAxis {
 public:
  UniformAxis() = default;
  /// Throws ParameterError unless lo < hi and n >= 2.
  UniformAxis(double lo, double hi, std::size_t n);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t size() const noexcept { return n_; }
  double step() const noexcept { return (hi_ - lo_) / static_cast<double>(n_ - 1); }
  double node(std::size_t i) const noexcept;
  std::vector<double> nodes() const;

  /// Index of the node equal to x (within 1e-9 of a step), or npos.
  std::size_t index_of(double x) const noexcept;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  friend bool operator==(const UniformAxis&, const UniformAxis&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 1.0;
  std::size_t n_ = 2;
};

/// Rectangular (q, p) grid with an optional scalar field stored row-major,
/// q outer: value(i, j) = values[i * n_p + j].
class PhaseGrid {
 public:
  PhaseGrid(UniformAxis q_axis, UniformAxis p_axis);
  PhaseGrid(double q_min, double q_max, std::size_t n_q, double p_min, double p_max,
            std::size_t n_p);
  /// Square grid [-half_width, half_width]^2 with n nodes per side.
  static PhaseGrid square(double half_width, std::size_t n);

  const UniformAxis& q_axis() const noexcept { return q_; }
  const UniformAxis& p_axis() const noexcept { return p_; }
  std::size_t n_q() const noexcept { return q_.size(); }
  std::size_t n_p() const noexcept { return p_.size(); }
  double q(std::size_t i) const noexcept { return q_.node(i); }
  double p(std::size_t j) const noexcept { return p_.node(j); }
  PhasePoint point(std::size_t i, std::size_t j) const noexcept { return {q(i), p(j)}; }

  bool has_values() const noexcept { return !values_.empty(); }
  std::span<const double> values() const noexcept { return values_; }
  double value(std::size_t i, std::size_t j) const noexcept { return values_[i * n_p() + j]; }
  /// Throws UsageError if the length is not n_q * n_p.
  void set_values(std::vector<double> values);
  PhaseGrid with_values(std::vector<double> values) const;
  /// Copy of the geometry with every node set to f(q, p).
  PhaseGrid sampled(const std::function<double(PhasePoint)>& f) const;

 private:
  UniformAxis q_;
  UniformAxis p_;
  std::vector<double> values_;
};

/// Phase-space region given by a pure predicate on PhasePoint. Axis-aligned
/// q-intervals are tagged so quadrature can integrate them exactly on nodes.
class Region {
 public:
  enum class Kind { All, QInterval, LevelSet, RightLobe };

  static Region all();
  /// Half line q > q1.
  static Region q_above(double q1);
  /// Strip q1 < q < q2 (either bound may be infinite).
  static Region q_interval(double q1, double q2);
  static Region predicate(std::function<bool(PhasePoint)> inside, Kind kind = Kind::LevelSet);

  Kind kind() const noexcept { return kind_; }
  double q_lower() const noexcept { return q1_; }
  double q_upper() const noexcept { return q2_; }
  bool contains(PhasePoint pt) const;

 private:
  Region(Kind kind, std::function<bool(PhasePoint)> inside, double q1, double q2);

  Kind kind_;
  std::function<bool(PhasePoint)> inside_;
  double q1_ = -std::numeric_limits<double>::infinity();
  double q2_ = std::numeric_limits<double>::infinity();
};

/// Composite Simpson weights for n uniformly spaced samples with step h.
/// An odd number of intervals closes with the 3/8 rule; n == 2 is trapezoid.
std::vector<double> simpson_weights(std::size_t n, double h);

double integrate_1d(std::span<const double> samples, double h);

/// Integral of samples over [a, b], where a and b are clamped to the axis.
/// Bounds on nodes integrate the node sub-range; bounds between nodes
/// add linearly interpolated end pieces.
double integrate_1d_interval(std::span<const double> samples, const UniformAxis& axis,
                             double a, double b);

/// Simpson quadrature of the grid's field. Throws UsageError without values.
double integrate_2d(const PhaseGrid& grid);

/// Quadrature restricted to a region. q-intervals are integrated over the
/// node sub-range; general predicates weight each node by the fraction of
/// its control cell lying inside the region.
double integrate_region(const PhaseGrid& grid, const Region& region);

/// Per-node region weights in [0, 1] (row-major like PhaseGrid values), from
/// subsamples x 2 subsamples points per straddling control cell.
std::vector<double> region_fractions(const PhaseGrid& grid, const Region& region,
                                     int subsamples = 8);

}  // namespace fockbarrier
