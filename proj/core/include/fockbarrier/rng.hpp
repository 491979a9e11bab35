#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace fockbarrier {

/// Deterministic random stream keyed by (seed, stream id).
///
/// The engine is std::mt19937_64 seeded through std::seed_seq, both of which
/// the standard specifies bit-for-bit, and the uniform/normal transforms are
/// implemented here rather than through std::*_distribution (whose output is
/// implementation defined). A given (seed, stream) therefore yields the same
/// sequence on every conforming platform. Ensembles use one stream per
/// trajectory index so results do not depend on execution order.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }

  /// Raw 64-bit engine output.
  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [a, b).
  double uniform(double a, double b);
  /// Normal(mean, sigma) by Box-Muller; throws ParameterError for sigma <= 0.
  double gaussian(double mean, double sigma);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

inline double sample_uniform(RngStream& rng, double a, double b) { return rng.uniform(a, b); }
inline double sample_gaussian(RngStream& rng, double mean, double sigma) {
  return rng.gaussian(mean, sigma);
}

}  // namespace fockbarrier
