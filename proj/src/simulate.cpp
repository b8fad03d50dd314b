#include "feller/simulate.hpp"

#include <cmath>
#include <string>

#include "feller/error.hpp"

namespace feller::sim {

using detail::require;

namespace {

// Below this many families the gamma draw is a sum of exponentials.
constexpr std::int64_t kExponentialSumLimit = 16;

void require_rates(const rrp::BdRates& rates) {
  require(rates.lambda_hat >= 0.0 && rates.mu_hat >= 0.0,
          "simulate_bd: rates must be >= 0");
}

}  // namespace

std::vector<PathPoint> simulate_bd(std::int64_t m0, const rrp::BdRates& rates,
                                   double horizon, SeededSource& source) {
  require(m0 >= 1, "simulate_bd: m0 must be >= 1");
  require(horizon > 0.0, "simulate_bd: horizon must be > 0");
  require_rates(rates);
  std::vector<PathPoint> path{{0.0, m0}};
  const double total_rate = rates.lambda_hat + rates.mu_hat;
  if (total_rate == 0.0) return path;
  const double birth_fraction = rates.lambda_hat / total_rate;
  double time = 0.0;
  std::int64_t count = m0;
  while (count > 0) {
    time += source.exponential(static_cast<double>(count) * total_rate);
    if (time > horizon) break;
    count += source.uniform() < birth_fraction ? 1 : -1;
    path.push_back({time, count});
  }
  return path;
}

std::int64_t simulate_bd_final(std::int64_t m0, const rrp::BdRates& rates,
                               double horizon, SeededSource& source) {
  require(m0 >= 1, "simulate_bd: m0 must be >= 1");
  require(horizon > 0.0, "simulate_bd: horizon must be > 0");
  require_rates(rates);
  const double total_rate = rates.lambda_hat + rates.mu_hat;
  if (total_rate == 0.0) return m0;
  const double birth_fraction = rates.lambda_hat / total_rate;
  double time = 0.0;
  std::int64_t count = m0;
  while (count > 0) {
    time += source.exponential(static_cast<double>(count) * total_rate);
    if (time > horizon) break;
    count += source.uniform() < birth_fraction ? 1 : -1;
  }
  return count;
}

std::vector<std::int64_t> simulate_bgw(const BgwScale& scale, Offspring offspring,
                                       std::int64_t generations,
                                       SeededSource& source,
                                       std::int64_t population_cap) {
  require(generations >= 1, "simulate_bgw: generations must be >= 1");
  const double lambda = scale.lambda_offspring;
  std::vector<std::int64_t> counts;
  counts.reserve(static_cast<std::size_t>(generations + 1));
  counts.push_back(scale.m0);
  std::int64_t current = scale.m0;
  for (std::int64_t g = 1; g <= generations; ++g) {
    if (current > 0) {
      if (offspring == Offspring::kPoisson) {
        current = source.poisson(lambda * static_cast<double>(current));
      } else {
        // Sum of `current` geometric failures-before-success counts.
        current = source.negative_binomial(current, 1.0 / (1.0 + lambda));
      }
    }
    if (current > population_cap) {
      throw PopulationBlowUp("simulate_bgw: population exceeded cap " +
                                 std::to_string(population_cap) +
                                 " (supercritical blow-up) at generation " +
                                 std::to_string(g),
                             g);
    }
    counts.push_back(current);
  }
  return counts;
}

double sample_feller_transition(double t, const ModelParams& params,
                                SeededSource& source) {
  require(t > 0.0, "sample_feller_transition: t must be > 0");
  if (params.x0 == 0.0) return 0.0;
  const std::int64_t families =
      source.poisson(params.x0 * mu(t, params.alpha));
  if (families == 0) return 0.0;
  const double mean_size = beta(t, params.alpha);
  if (families <= kExponentialSumLimit) {
    double total = 0.0;
    for (std::int64_t i = 0; i < families; ++i) {
      total += source.exponential(1.0 / mean_size);
    }
    return total;
  }
  return source.gamma(static_cast<double>(families), mean_size);
}

std::int64_t sample_population_ancestors(const TimeWindow& window,
                                         const ModelParams& params,
                                         SeededSource& source) {
  const double lookback = window.t - window.s;
  const double x = lookback > 0.0
                       ? sample_feller_transition(lookback, params, source)
                       : params.x0;
  if (x == 0.0) return 0;
  return source.poisson(x * mu(window.s, params.alpha));
}

std::int64_t sample_subsample_ancestors(std::int64_t n, std::int64_t k,
                                        SeededSource& source) {
  require(n >= 1 && k >= 1, "sample_subsample_ancestors: require n, k >= 1");
  // Polya urn over k parts each starting with weight 1: with i balls placed
  // and j parts occupied, the next ball opens a new part w.p. (k - j)/(k + i).
  std::int64_t occupied = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double open = static_cast<double>(k - occupied) /
                        static_cast<double>(k + i);
    if (source.uniform() < open) ++occupied;
  }
  return occupied;
}

std::vector<double> sample_coalescent_times_nhpp(double x, double alpha,
                                                 double tau_min,
                                                 SeededSource& source) {
  require(x > 0.0 && alpha > 0.0,
          "sample_coalescent_times_nhpp: require x > 0 and alpha > 0");
  require(tau_min > 0.0,
          "sample_coalescent_times_nhpp: tau_min must be > 0 (infinitely many "
          "points accumulate at 0)");
  std::vector<double> points;
  double cumulative = 0.0;
  for (;;) {
    cumulative += source.exponential(1.0);
    const double tau = rrp::inverse_cumulative_intensity(cumulative, x, alpha);
    if (tau <= tau_min) break;
    points.push_back(tau);
  }
  return points;
}

std::vector<double> sample_coalescent_points(double x, double alpha,
                                             std::int64_t count,
                                             SeededSource& source) {
  require(count >= 0, "sample_coalescent_points: count must be >= 0");
  std::vector<double> points;
  points.reserve(static_cast<std::size_t>(count));
  double cumulative = 0.0;
  for (std::int64_t i = 0; i < count; ++i) {
    cumulative += source.exponential(1.0);
    points.push_back(rrp::inverse_cumulative_intensity(cumulative, x, alpha));
  }
  return points;
}

std::vector<double> sample_sample_waiting_times(std::int64_t n, double x,
                                                double alpha,
                                                std::int64_t lineage_cap,
                                                SeededSource& source) {
  require(n >= 2, "sample_sample_waiting_times: n must be >= 2");
  require(lineage_cap >= n,
          "sample_sample_waiting_times: lineage_cap must be >= n");
  // points[l] < tau < points[l-1] is an interval with l lineages.
  const std::vector<double> points =
      sample_coalescent_points(x, alpha, lineage_cap + 1, source);
  std::vector<double> waits(static_cast<std::size_t>(n - 1), 0.0);

  std::int64_t ancestors = sample_subsample_ancestors(n, lineage_cap, source);
  for (std::int64_t lineages = lineage_cap; lineages >= 2; --lineages) {
    if (ancestors < 2) break;
    const auto l = static_cast<std::size_t>(lineages);
    waits[static_cast<std::size_t>(ancestors - 2)] += points[l - 1] - points[l];
    // The merge at points[l-1] joins a uniform pair of the l lineages.
    const double both = static_cast<double>(ancestors * (ancestors - 1)) /
                        static_cast<double>(lineages * (lineages - 1));
    if (source.uniform() < both) --ancestors;
  }
  return waits;
}

}  // namespace feller::sim
