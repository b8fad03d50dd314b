#ifndef FELLER_VERIFY_ORACLES_HPP_
#define FELLER_VERIFY_ORACLES_HPP_

// Independent reference computations used only by the verifiers and tests.
// None of them share code paths with the library routines they check.

#include <cstdint>
#include <vector>

namespace feller::oracle {

// Polya-Aeppli probabilities P(0..k_max) by discrete Fourier inversion of
// the pgf exp(nu (G(z) - 1)), G(z) = (1-p) z / (1 - p z), sampled at
// `points` roots of unity. Aliasing error is the mass beyond `points`.
std::vector<double> polya_aeppli_by_pgf(double nu, double p, int k_max,
                                        int points = 4096);

// Counts of weak compositions of n into k parts by number of nonzero parts:
// element j is the number with exactly j nonzero parts (j = 0..n).
std::vector<std::uint64_t> composition_counts(int n, int k);

// Kummer M(a, b, z) by its power series in 50-digit arithmetic.
double kummer_m_multiprecision(double a, double b, double z);

// log of a^(n) = a (a+1) ... (a+n-1) in 50-digit arithmetic.
double log_rising_factorial_multiprecision(double a, std::int64_t n);

// Exact moments of X(t) from derivatives of the Laplace transform
// exp(-phi x0 e^{alpha t} / (1 + phi beta)): mean x0 e^{alpha t}, variance
// 2 x0 e^{alpha t} beta(t).
struct FellerMoments {
  double mean;
  double variance;
};
FellerMoments feller_moments(double t, double alpha, double x0);

}  // namespace feller::oracle

#endif  // FELLER_VERIFY_ORACLES_HPP_
