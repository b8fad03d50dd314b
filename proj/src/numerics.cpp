#include "feller/numerics.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "feller/error.hpp"

namespace feller {

using detail::require;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Products below 2^53 are exact in double arithmetic.
constexpr double kExactProductLimit = 9007199254740992.0;

double log_sum_exp(const std::vector<double>& terms) {
  double peak = kNegInf;
  for (double v : terms) peak = std::max(peak, v);
  if (peak == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double v : terms) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

}  // namespace

double log_rising_factorial(std::int64_t k, std::int64_t n) {
  require(k >= 1, "log_rising_factorial: k must be >= 1");
  require(n >= 0, "log_rising_factorial: n must be >= 0");
  if (n == 0) return 0.0;
  double product = 1.0;
  for (std::int64_t i = 0; i < n; ++i) {
    product *= static_cast<double>(k + i);
    if (product >= kExactProductLimit) {
      return std::lgamma(static_cast<double>(k + n)) -
             std::lgamma(static_cast<double>(k));
    }
  }
  return std::log(product);
}

double log_rising_factorial(double a, std::int64_t n) {
  require(a > 0.0, "log_rising_factorial: a must be > 0");
  require(n >= 0, "log_rising_factorial: n must be >= 0");
  if (n == 0) return 0.0;
  return std::lgamma(a + static_cast<double>(n)) - std::lgamma(a);
}

double log_falling_factorial(std::int64_t n, std::int64_t j) {
  require(j >= 0 && j <= n, "log_falling_factorial: require 0 <= j <= n");
  if (j == 0) return 0.0;
  return log_rising_factorial(n - j + 1, j);
}

double log_binomial(std::int64_t n, std::int64_t k) {
  require(k >= 0 && k <= n, "log_binomial: require 0 <= k <= n");
  if (k == 0 || k == n) return 0.0;
  const auto dn = static_cast<double>(n);
  const auto dk = static_cast<double>(k);
  return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) -
         std::lgamma(dn - dk + 1.0);
}

double log_beta_function(double a, double b) {
  require(a > 0.0 && b > 0.0, "log_beta_function: require a, b > 0");
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double kummer_m(double a, double b, double z) {
  require(a > 0.0 && b > 0.0, "kummer_m: require a, b > 0");
  require(z >= 0.0 && std::isfinite(z), "kummer_m: require finite z >= 0");
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < kKummerMaxTerms; ++k) {
    const double dk = static_cast<double>(k);
    term *= (a + dk) / (b + dk) * z / (dk + 1.0);
    sum += term;
    // Once the term ratio r is below one (and falling) the tail is bounded
    // by the geometric series term * r / (1 - r).
    const double ratio = (a + dk + 1.0) * z / ((b + dk + 1.0) * (dk + 2.0));
    if (ratio < 1.0 && term * ratio / (1.0 - ratio) <= kKummerRelTol * sum) {
      return sum;
    }
    if (!std::isfinite(sum)) break;
  }
  throw NumericError("kummer_m: series did not converge", sum, term);
}

namespace {

// Large-z expansion M(a,b,z) ~ Gamma(b)/Gamma(a) e^z z^{a-b}
// sum_s (b-a)_s (1-a)_s / s! z^{-s}. Returns NaN if the truncated expansion
// does not reach full precision.
double log_kummer_asymptotic(double a, double b, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int s = 0; s < 200; ++s) {
    const double ds = static_cast<double>(s);
    const double next = term * (b - a + ds) * (1.0 - a + ds) / ((ds + 1.0) * z);
    if (next == 0.0) {
      sum += next;
      if (sum <= 0.0) break;
      return std::lgamma(b) - std::lgamma(a) + z + (a - b) * std::log(z) +
             std::log(sum);
    }
    if (std::abs(next) >= std::abs(term)) break;  // divergent tail
    term = next;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) {
      if (sum <= 0.0) break;
      return std::lgamma(b) - std::lgamma(a) + z + (a - b) * std::log(z) +
             std::log(sum);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double log_kummer_m(double a, double b, double z) {
  require(a > 0.0 && b > 0.0, "log_kummer_m: require a, b > 0");
  require(z >= 0.0 && std::isfinite(z), "log_kummer_m: require finite z >= 0");
  if (z == 0.0) return 0.0;
  // The neglected companion term is O(e^{-z} z^{b+1}) relative to the
  // leading one; only trust the expansion once that is far below precision.
  if (z - (b + 1.0) * std::log(z) > 40.0) {
    const double asym = log_kummer_asymptotic(a, b, z);
    if (!std::isnan(asym)) return asym;
  }
  // Series in log space, normalised by the running maximum term.
  double log_term = 0.0;
  double peak = 0.0;
  double scaled_sum = 1.0;  // sum of exp(log_term - peak)
  const double log_z = std::log(z);
  for (int k = 0; k < kKummerMaxTerms; ++k) {
    const double dk = static_cast<double>(k);
    log_term += std::log(a + dk) - std::log(b + dk) + log_z - std::log(dk + 1.0);
    if (log_term > peak) {
      scaled_sum = scaled_sum * std::exp(peak - log_term) + 1.0;
      peak = log_term;
    } else {
      scaled_sum += std::exp(log_term - peak);
    }
    const double ratio = (a + dk + 1.0) * z / ((b + dk + 1.0) * (dk + 2.0));
    if (ratio < 1.0 && log_term - peak + std::log(ratio / (1.0 - ratio)) <
                           std::log(kKummerRelTol * scaled_sum)) {
      return peak + std::log(scaled_sum);
    }
  }
  throw NumericError("log_kummer_m: series did not converge",
                     peak + std::log(scaled_sum), log_term);
}

namespace {

void require_pa(double nu, double p) {
  require(p >= 0.0 && p < 1.0, "polya_aeppli: p must lie in [0, 1)");
  require(std::isfinite(nu), "polya_aeppli: nu must be finite");
}

// log sum_{j=1}^{k} C(k-1, j-1) nu^{j-1} (1-p)^j p^{k-j} / j!, i.e. the
// Polya-Aeppli sum with one factor of nu pulled out. Valid for nu >= 0.
double log_pa_sum(std::int64_t k, double nu, double p) {
  if (p == 0.0) {
    // ShiftedGeom(0) = 1: only j = k survives.
    if (nu == 0.0) return k == 1 ? 0.0 : kNegInf;
    const auto dk = static_cast<double>(k);
    return (dk - 1.0) * std::log(nu) - std::lgamma(dk + 1.0);
  }
  if (nu == 0.0) {
    // only j = 1 survives
    return std::log1p(-p) + static_cast<double>(k - 1) * std::log(p);
  }
  const double log_nu = std::log(nu);
  const double log_q = std::log1p(-p);
  const double log_p = std::log(p);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(k));
  for (std::int64_t j = 1; j <= k; ++j) {
    const auto dj = static_cast<double>(j);
    terms.push_back(log_binomial(k - 1, j - 1) + (dj - 1.0) * log_nu +
                    dj * log_q + static_cast<double>(k - j) * log_p -
                    std::lgamma(dj + 1.0));
  }
  return log_sum_exp(terms);
}

}  // namespace

double polya_aeppli_pmf(std::int64_t k, double nu, double p) {
  require_pa(nu, p);
  require(nu > 0.0, "polya_aeppli_pmf: nu must be > 0");
  require(k >= 0, "polya_aeppli_pmf: k must be >= 0");
  if (k == 0) return std::exp(-nu);
  return std::exp(-nu + std::log(nu) + log_pa_sum(k, nu, p));
}

double polya_aeppli_pmf_positive(std::int64_t k, double nu, double p) {
  require_pa(nu, p);
  require(nu >= 0.0, "polya_aeppli_pmf_positive: nu must be >= 0");
  require(k >= 0, "polya_aeppli_pmf_positive: k must be >= 0");
  if (k == 0) return 0.0;
  // e^{-nu} nu / (1 - e^{-nu}) = nu / expm1(nu) -> 1 as nu -> 0
  const double lead = nu == 0.0 ? 0.0 : std::log(nu / std::expm1(nu));
  return std::exp(lead + log_pa_sum(k, nu, p));
}

double polya_aeppli_mean(double nu, double p) {
  require_pa(nu, p);
  return nu / (1.0 - p);
}

}  // namespace feller
