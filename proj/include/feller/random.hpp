#ifndef FELLER_RANDOM_HPP_
#define FELLER_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace feller {

// A reproducible pseudorandom stream. Identical (seed, stream_id) pairs give
// identical draw sequences; distinct stream ids give independent streams for
// parallel or per-check Monte Carlo.
class SeededSource {
 public:
  explicit SeededSource(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // A fresh source on the same seed and a different stream.
  SeededSource substream(std::uint64_t stream_id) const {
    return SeededSource(seed_, stream_id);
  }

  std::mt19937_64& engine() { return engine_; }

  // Uniform on the open interval (0, 1).
  double uniform();
  double exponential(double rate);
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);  // inclusive
  std::int64_t poisson(double mean);
  std::int64_t binomial(std::int64_t trials, double p);
  // Number of failures before `successes` successes, success probability p.
  std::int64_t negative_binomial(std::int64_t successes, double p);
  // Gamma with the given shape and scale (mean shape * scale).
  double gamma(double shape, double scale);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace feller

#endif  // FELLER_RANDOM_HPP_
