#include "feller/ancestry.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "feller/error.hpp"
#include "feller/numerics.hpp"

namespace feller {

using detail::require;

namespace {

constexpr std::int64_t kMaxTableLength = 10'000'000;

// Lazily grown table of log k!.
class LogFactorials {
 public:
  double operator()(std::int64_t k) {
    while (static_cast<std::int64_t>(values_.size()) <= k) {
      const auto n = static_cast<double>(values_.size());
      values_.push_back(values_.empty() ? 0.0 : values_.back() + std::log(n));
    }
    return values_[static_cast<std::size_t>(k)];
  }

 private:
  std::vector<double> values_;
};

std::uint64_t checked_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    r = r * (n - i) / (i + 1);
    if (r > std::numeric_limits<std::uint64_t>::max()) {
      throw DomainError("sample_given_population_fraction: 64-bit overflow");
    }
  }
  return static_cast<std::uint64_t>(r);
}

void require_subsample_args(std::int64_t j, std::int64_t n, std::int64_t k) {
  require(n >= 1, "sample size n must be >= 1");
  require(k >= 1, "population ancestor count k must be >= 1");
  require(j >= 1, "ancestor count j must be >= 1");
  require(j <= n, "ancestor count j cannot exceed the sample size n");
}

// log of the subsampling weight C(k, j) n! / k_(n) C(n-1, j-1), for 1 <= j <= k.
double log_subsample_weight(std::int64_t j, std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) + log_binomial(n - 1, j - 1) +
         log_binomial(k, j) - log_rising_factorial(k, n);
}

}  // namespace

PolyaAeppliParams::PolyaAeppliParams(double nu_in, double p_in)
    : nu(nu_in), p(p_in) {
  require(std::isfinite(nu) && nu >= 0.0, "PolyaAeppliParams: nu must be >= 0");
  require(p >= 0.0 && p < 1.0, "PolyaAeppliParams: p must lie in [0, 1)");
}

std::int64_t DiscretePmf::support_end() const {
  return support_start + static_cast<std::int64_t>(probabilities.size());
}

double DiscretePmf::at(std::int64_t k) const {
  if (k < support_start || k >= support_end()) return 0.0;
  return probabilities[static_cast<std::size_t>(k - support_start)];
}

double DiscretePmf::listed_mass() const {
  return std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
}

double DiscretePmf::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    m += static_cast<double>(support_start + static_cast<std::int64_t>(i)) *
         probabilities[i];
  }
  return m;
}

PolyaAeppliParams ancestor_params(const TimeWindow& window,
                                  const ModelParams& params) {
  require(params.x0 > 0.0, "ancestor_params: x0 must be > 0");
  const double nu =
      std::exp(std::log(params.x0) + log_mu(window.t, params.alpha));
  return {nu, geom_p(window.s, window.t, params.alpha)};
}

double population_ancestors_pmf(std::int64_t k, const TimeWindow& window,
                                const ModelParams& params,
                                bool conditioned_on_survival) {
  require(k >= 0, "population_ancestors_pmf: k must be >= 0");
  const PolyaAeppliParams pa = ancestor_params(window, params);
  if (conditioned_on_survival) return polya_aeppli_pmf_positive(k, pa.nu, pa.p);
  if (pa.nu == 0.0) return k == 0 ? 1.0 : 0.0;
  return polya_aeppli_pmf(k, pa.nu, pa.p);
}

DiscretePmf polya_aeppli_table(const PolyaAeppliParams& pa,
                               bool conditioned_on_positive, double tail_tol) {
  require(tail_tol > 0.0, "polya_aeppli_table: tail_tol must be > 0");
  DiscretePmf out;
  out.support_start = conditioned_on_positive ? 1 : 0;
  if (!conditioned_on_positive && pa.nu == 0.0) {
    out.probabilities = {1.0};
    return out;
  }

  LogFactorials log_fact;
  const double nu = pa.nu;
  const double p = pa.p;
  const double log_nu = nu > 0.0 ? std::log(nu) : 0.0;
  const double log_q = std::log1p(-p);
  const double log_p = p > 0.0 ? std::log(p) : 0.0;
  // log of the prefactor multiplying nu * (sum with one nu pulled out)
  const double log_lead = conditioned_on_positive
                              ? (nu == 0.0 ? 0.0 : std::log(nu / std::expm1(nu)))
                              : -nu + log_nu;

  double cumulative = 0.0;
  if (!conditioned_on_positive) {
    out.probabilities.push_back(std::exp(-nu));
    cumulative = out.probabilities.back();
  }
  std::vector<double> terms;
  for (std::int64_t k = 1; 1.0 - cumulative >= tail_tol; ++k) {
    if (k > kMaxTableLength) {
      throw NumericError("polya_aeppli_table: tail not reached", cumulative,
                         1.0 - cumulative);
    }
    double value = 0.0;
    if (p == 0.0) {
      const auto dk = static_cast<double>(k);
      value = nu == 0.0 ? (k == 1 ? 1.0 : 0.0)
                        : std::exp(log_lead + (dk - 1.0) * log_nu - log_fact(k));
    } else if (nu == 0.0) {
      value = std::exp(log_lead + log_q + static_cast<double>(k - 1) * log_p);
    } else {
      terms.clear();
      double peak = -std::numeric_limits<double>::infinity();
      for (std::int64_t j = 1; j <= k; ++j) {
        const auto dj = static_cast<double>(j);
        const double t = log_fact(k - 1) - log_fact(j - 1) - log_fact(k - j) +
                         (dj - 1.0) * log_nu + dj * log_q +
                         static_cast<double>(k - j) * log_p - log_fact(j);
        terms.push_back(t);
        peak = std::max(peak, t);
      }
      double sum = 0.0;
      for (double t : terms) sum += std::exp(t - peak);
      value = std::exp(log_lead + peak + std::log(sum));
    }
    out.probabilities.push_back(value);
    cumulative += value;
    // p == 0 and nu == 0 is a point mass at 1
    if (p == 0.0 && nu == 0.0) break;
  }
  out.truncation_tail_bound = std::max(0.0, 1.0 - cumulative);
  return out;
}

DiscretePmf population_ancestors_table(const TimeWindow& window,
                                       const ModelParams& params,
                                       bool conditioned_on_survival,
                                       double tail_tol) {
  return polya_aeppli_table(ancestor_params(window, params),
                            conditioned_on_survival, tail_tol);
}

double sample_given_population_pmf(std::int64_t j, std::int64_t n,
                                   std::int64_t k) {
  require_subsample_args(j, n, k);
  if (j > k) return 0.0;
  return std::exp(log_subsample_weight(j, n, k));
}

Fraction sample_given_population_fraction(std::int64_t j, std::int64_t n,
                                          std::int64_t k) {
  require_subsample_args(j, n, k);
  if (j > k) return {0, 1};
  const auto uj = static_cast<std::uint64_t>(j);
  const auto un = static_cast<std::uint64_t>(n);
  const auto uk = static_cast<std::uint64_t>(k);
  // n! / k_(n) = 1 / C(n + k - 1, n)
  unsigned __int128 num = static_cast<unsigned __int128>(checked_binomial(uk, uj)) *
                          checked_binomial(un - 1, uj - 1);
  std::uint64_t den = checked_binomial(un + uk - 1, un);
  const std::uint64_t g =
      std::gcd(static_cast<std::uint64_t>(num % den), den);
  num /= g;
  den /= g;
  if (num > std::numeric_limits<std::uint64_t>::max()) {
    throw DomainError("sample_given_population_fraction: 64-bit overflow");
  }
  return {static_cast<std::uint64_t>(num), den};
}

DiscretePmf mix_sample_over_population(std::int64_t n,
                                       const DiscretePmf& population) {
  require(n >= 1, "sample size n must be >= 1");
  DiscretePmf out;
  out.support_start = 1;
  out.probabilities.assign(static_cast<std::size_t>(n), 0.0);
  const std::int64_t first = std::max<std::int64_t>(1, population.support_start);
  for (std::int64_t k = first; k < population.support_end(); ++k) {
    const double pk = population.at(k);
    if (pk == 0.0) continue;
    const double log_pk = std::log(pk);
    const double log_rising = log_rising_factorial(k, n);
    for (std::int64_t j = 1; j <= std::min(n, k); ++j) {
      const double w = std::lgamma(static_cast<double>(n) + 1.0) +
                       log_binomial(n - 1, j - 1) + log_binomial(k, j) -
                       log_rising;
      out.probabilities[static_cast<std::size_t>(j - 1)] += std::exp(w + log_pk);
    }
  }
  out.total_mass = population.total_mass - population.at(0);
  // Spread the truncated population tail proportionally so the rows sum to
  // total_mass; the cut tail still bounds the error in each entry.
  const double listed = population.listed_mass() - population.at(0);
  if (listed > 0.0) {
    for (double& p : out.probabilities) p *= out.total_mass / listed;
  }
  out.truncation_tail_bound = population.truncation_tail_bound;
  return out;
}

double sample_ancestors_pmf(std::int64_t j, std::int64_t n,
                            const TimeWindow& window,
                            const ModelParams& params, double tail_tol) {
  require(n >= 1, "sample size n must be >= 1");
  require(j >= 1 && j <= n, "sample_ancestors_pmf: require 1 <= j <= n");
  return sample_ancestors_table(n, window, params, tail_tol).at(j);
}

DiscretePmf sample_ancestors_table(std::int64_t n, const TimeWindow& window,
                                   const ModelParams& params,
                                   double tail_tol) {
  return mix_sample_over_population(
      n, population_ancestors_table(window, params, true, tail_tol));
}

}  // namespace feller
