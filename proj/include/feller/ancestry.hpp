#ifndef FELLER_ANCESTRY_HPP_
#define FELLER_ANCESTRY_HPP_

// Ancestor counts of a Feller diffusion observed at time t since initiation:
// the number of ancestors s back of the whole population, A_inf(s; t), and of
// a uniform sample of n individuals, A_n(s; t).

#include <cstdint>
#include <vector>

#include "feller/model.hpp"

namespace feller {

// Parameters of the Polya-Aeppli law of A_inf(s; t): nu = x0 mu(t), p =
// geom_p(s, t). nu may underflow to 0 for extreme subcritical t; the
// survival-conditioned law is still well defined in that limit.
struct PolyaAeppliParams {
  PolyaAeppliParams(double nu, double p);

  double nu;
  double p;
};

// A probability mass function on support_start, support_start + 1, ...
// `total_mass` is the analytic mass of the law (1 unless the law is
// defective); the listed probabilities fall short of it by at most
// `truncation_tail_bound`.
struct DiscretePmf {
  std::int64_t support_start = 0;
  std::vector<double> probabilities;
  double total_mass = 1.0;
  double truncation_tail_bound = 0.0;

  std::int64_t support_end() const;  // one past the last listed value
  double at(std::int64_t k) const;   // 0 outside the listed range
  double listed_mass() const;
  double mean() const;
};

// Default tail mass at which infinite sums and tables are cut.
inline constexpr double kDefaultTailTolerance = 1e-12;

PolyaAeppliParams ancestor_params(const TimeWindow& window,
                                  const ModelParams& params);

// P(A_inf(s; t) = k), optionally conditioned on survival X(t) > 0.
double population_ancestors_pmf(std::int64_t k, const TimeWindow& window,
                                 const ModelParams& params,
                                 bool conditioned_on_survival);

// Whole law of A_inf(s; t), cut where the remaining tail is below tail_tol.
DiscretePmf population_ancestors_table(
    const TimeWindow& window, const ModelParams& params,
    bool conditioned_on_survival,
    double tail_tol = kDefaultTailTolerance);

// Same, directly from Polya-Aeppli parameters.
DiscretePmf polya_aeppli_table(const PolyaAeppliParams& pa,
                               bool conditioned_on_positive,
                               double tail_tol = kDefaultTailTolerance);

// P(A_n = j | A_inf = k) = C(k, j) n! / k_(n) C(n-1, j-1): the number of
// occupied families when a sample of n is spread over k exchangeable
// families with Dirichlet(1, ..., 1) sizes. Zero for j > k. Throws for
// j < 1, n < 1, k < 1 or j > n.
double sample_given_population_pmf(std::int64_t j, std::int64_t n,
                                   std::int64_t k);

// The same probability as an exact reduced fraction. Throws DomainError if
// the integers involved overflow 64 bits.
struct Fraction {
  std::uint64_t numerator;
  std::uint64_t denominator;
  bool operator==(const Fraction&) const = default;
};
Fraction sample_given_population_fraction(std::int64_t j, std::int64_t n,
                                          std::int64_t k);

// P(A_n(s; t) = j), 1 <= j <= n: the subsampling weights averaged over the
// survival-conditioned population law, truncated at tail_tol.
double sample_ancestors_pmf(std::int64_t j, std::int64_t n,
                            const TimeWindow& window,
                            const ModelParams& params,
                            double tail_tol = kDefaultTailTolerance);

// The whole law of A_n(s; t) on 1..n.
DiscretePmf sample_ancestors_table(std::int64_t n, const TimeWindow& window,
                                   const ModelParams& params,
                                   double tail_tol = kDefaultTailTolerance);

// Average the subsampling weights over an arbitrary law of A_inf restricted to
// k >= 1 (used for the quasi-stationary and RRP variants as well).
DiscretePmf mix_sample_over_population(std::int64_t n,
                                       const DiscretePmf& population);

}  // namespace feller

#endif  // FELLER_ANCESTRY_HPP_
