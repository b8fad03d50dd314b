#ifndef FELLER_SIMULATE_HPP_
#define FELLER_SIMULATE_HPP_

#include <cstdint>
#include <vector>

#include "feller/model.hpp"
#include "feller/random.hpp"
#include "feller/reconstructed.hpp"

namespace feller::sim {

struct PathPoint {
  double time;
  std::int64_t count;
};

// Exact event-driven path of a linear BD process from m0 individuals up to
// time horizon. The first point is (0, m0); each later point is a jump. The
// path stops early at extinction.
std::vector<PathPoint> simulate_bd(std::int64_t m0, const rrp::BdRates& rates,
                                   double horizon, SeededSource& source);

// M(horizon) from the same dynamics without storing the path.
std::int64_t simulate_bd_final(std::int64_t m0, const rrp::BdRates& rates,
                               double horizon, SeededSource& source);

enum class Offspring {
  kPoisson,    // Poisson(lambda), variance lambda
  kGeometric,  // geometric on {0, 1, ...} with mean lambda, variance lambda (1 + lambda)
};

inline constexpr std::int64_t kDefaultPopulationCap = std::int64_t{1} << 40;

// Tracked subpopulation M(0..generations) of a BGW process with M(0) = m0.
// A generation's offspring total is drawn in one step from the exact law of a
// sum of M(i) iid offspring counts. Throws PopulationBlowUp past the cap.
std::vector<std::int64_t> simulate_bgw(const BgwScale& scale, Offspring offspring,
                                       std::int64_t generations,
                                       SeededSource& source,
                                       std::int64_t population_cap = kDefaultPopulationCap);

// X(t) given X(0) = x0: L ~ Poisson(x0 mu(t)) families, each Exp with mean
// beta(t).
double sample_feller_transition(double t, const ModelParams& params,
                                SeededSource& source);

// A_inf(s; t) by the two-step construction: X(t - s), then Poisson(X mu(s)).
std::int64_t sample_population_ancestors(const TimeWindow& window,
                                         const ModelParams& params,
                                         SeededSource& source);

// Number of the k population ancestors represented in a sample of n, with
// family sizes Dirichlet-multinomial(n, 1_k).
std::int64_t sample_subsample_ancestors(std::int64_t n, std::int64_t k,
                                        SeededSource& source);

// Points of the NHPP with cumulative intensity x / beta(tau) above tau_min,
// in decreasing order. The first point is the founder's origin, the rest are
// coalescence times.
std::vector<double> sample_coalescent_times_nhpp(double x, double alpha,
                                                 double tau_min,
                                                 SeededSource& source);

// The first `count` NHPP points, decreasing.
std::vector<double> sample_coalescent_points(double x, double alpha,
                                             std::int64_t count,
                                             SeededSource& source);

// Inter-coalescence times W_2..W_n of a sample of n from the RRP population.
// The population tree is generated down to lineage_cap lineages; below that
// the sample's ancestor count is drawn from the subsampling law and the time
// spent there is not recorded. Element i holds W_{i+2}.
std::vector<double> sample_sample_waiting_times(std::int64_t n, double x,
                                                double alpha,
                                                std::int64_t lineage_cap,
                                                SeededSource& source);

}  // namespace feller::sim

#endif  // FELLER_SIMULATE_HPP_
