#include "fockbarrier/rng.hpp"

#include <cmath>
#include <numbers>

#include "fockbarrier/errors.hpp"

namespace fockbarrier {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_(stream_id), engine_(seeded_engine(seed, stream_id)) {}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double a, double b) { return a + (b - a) * uniform(); }

double RngStream::gaussian(double mean, double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("gaussian sigma must be positive");
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return mean + sigma * z;
  }
  // 1 - u keeps the logarithm finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  return mean + sigma * r * std::cos(phi);
}

}  // namespace fockbarrier
