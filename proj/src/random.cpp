#include "feller/random.hpp"

#include <cmath>

#include "feller/error.hpp"

namespace feller {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

SeededSource::SeededSource(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

double SeededSource::uniform() {
  for (;;) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

double SeededSource::exponential(double rate) {
  detail::require(rate > 0.0, "exponential: rate must be > 0");
  return -std::log(uniform()) / rate;
}

std::int64_t SeededSource::uniform_int(std::int64_t lo, std::int64_t hi) {
  detail::require(lo <= hi, "uniform_int: require lo <= hi");
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
}

std::int64_t SeededSource::poisson(double mean) {
  detail::require(mean >= 0.0 && std::isfinite(mean),
                  "poisson: mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  return std::poisson_distribution<std::int64_t>(mean)(engine_);
}

std::int64_t SeededSource::binomial(std::int64_t trials, double p) {
  detail::require(trials >= 0 && p >= 0.0 && p <= 1.0,
                  "binomial: require trials >= 0 and p in [0, 1]");
  if (trials == 0 || p == 0.0) return 0;
  if (p == 1.0) return trials;
  return std::binomial_distribution<std::int64_t>(trials, p)(engine_);
}

std::int64_t SeededSource::negative_binomial(std::int64_t successes, double p) {
  detail::require(successes >= 0 && p > 0.0 && p <= 1.0,
                  "negative_binomial: require successes >= 0 and p in (0, 1]");
  if (successes == 0 || p == 1.0) return 0;
  return std::negative_binomial_distribution<std::int64_t>(successes, p)(engine_);
}

double SeededSource::gamma(double shape, double scale) {
  detail::require(shape > 0.0 && scale > 0.0, "gamma: shape and scale must be > 0");
  return std::gamma_distribution<double>(shape, scale)(engine_);
}

}  // namespace feller
