#ifndef FELLER_NUMERICS_HPP_
#define FELLER_NUMERICS_HPP_

// Special functions shared by the analytic modules. Everything combinatorial
// is evaluated in log space.

#include <cstdint>

namespace feller {

// log of k (k+1) ... (k+n-1). Exact product for small arguments, log-Gamma
// difference otherwise.
double log_rising_factorial(std::int64_t k, std::int64_t n);
// Real-argument version, a > 0.
double log_rising_factorial(double a, std::int64_t n);
// log of n (n-1) ... (n-j+1), 0 <= j <= n.
double log_falling_factorial(std::int64_t n, std::int64_t j);
// log C(n, k), 0 <= k <= n.
double log_binomial(std::int64_t n, std::int64_t k);
// log B(a, b) for a, b > 0.
double log_beta_function(double a, double b);

// Kummer's confluent hypergeometric function M(a, b, z) = sum_k a_(k) /
// (b_(k) k!) z^k for a, b > 0 and z >= 0, summed to relative precision
// kKummerRelTol. Throws NumericError carrying the partial sum when the
// series has not converged after kKummerMaxTerms terms.
inline constexpr double kKummerRelTol = 1e-15;
inline constexpr int kKummerMaxTerms = 100000;
double kummer_m(double a, double b, double z);
// log M(a, b, z). Uses the large-z expansion when it converges (it
// terminates for positive integer a), otherwise the series in log space, so
// it stays finite where M overflows.
double log_kummer_m(double a, double b, double z);

// Polya-Aeppli (geometric compound Poisson) pmf: Q = M_1 + ... + M_N with
// N ~ Poisson(nu) and M_i ~ ShiftedGeom(p), P(M = m) = (1 - p) p^{m-1}.
//   P(Q = 0) = e^{-nu}
//   P(Q = k) = e^{-nu} sum_{j=1}^{k} C(k-1, j-1) (nu (1-p))^j p^{k-j} / j!
// Requires nu > 0 and 0 <= p < 1.
double polya_aeppli_pmf(std::int64_t k, double nu, double p);
// P(Q = k | Q > 0). Accepts nu >= 0; nu -> 0 gives the ShiftedGeom(p) limit.
double polya_aeppli_pmf_positive(std::int64_t k, double nu, double p);
// E[Q] = nu / (1 - p).
double polya_aeppli_mean(double nu, double p);

}  // namespace feller

#endif  // FELLER_NUMERICS_HPP_
