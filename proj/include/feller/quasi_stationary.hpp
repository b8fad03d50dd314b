#ifndef FELLER_QUASI_STATIONARY_HPP_
#define FELLER_QUASI_STATIONARY_HPP_

// Subcritical (alpha < 0) coalescent in the quasi-stationary limit: t -> inf
// at fixed lookback s, conditioned on survival. All functions throw
// DomainError for alpha >= 0.

#include <cstdint>

#include "feller/quadrature.hpp"

namespace feller::qs {

// Shifted geometric law of the population ancestor count:
// (1 - e^{-|alpha| s}) e^{-|alpha| (k-1) s}, k >= 1.
double population_ancestors_pmf(std::int64_t k, double s, double alpha);

// P(T_k > s) = e^{-|alpha| (k-1) s}: T_k is the time back to k-1 ancestors.
double tk_survival(std::int64_t k, double s, double alpha);

// E[W_k] = 1 / (|alpha| k (k-1)), k >= 2.
double mean_wk(std::int64_t k, double alpha);

// Quadrature settings used by the integral representations below.
QuadratureSpec default_quadrature();

// P(A_n(s; inf) = j) =
//   n C(n-1, j-1) (1 - r) int_0^1 r^{j-1} u^{j-1} (1-u)^{n-1}
//                                 / (1 - u r)^{j+1} du,   r = e^{-|alpha| s}.
double sample_ancestors_pmf(std::int64_t j, std::int64_t n, double s,
                            double alpha,
                            const QuadratureSpec& quad = default_quadrature());

// P(W_k > w) = k (1 - r) int_0^1 r^{k-1} u^{k-1} (1-u)^{k-1}
//                                 / (1 - u r)^{k+1} du,   r = e^{-|alpha| w}.
// Equal to 1 at w = 0 and 0 at w = +inf.
double wk_survival(double w, std::int64_t k, double alpha,
                   const QuadratureSpec& quad = default_quadrature());

// Beta(1, k-1) density (k-1)(1-u)^{k-2} of the population frequency of a
// mutation arising while there are k ancestors.
double mutant_frequency_density(double u, std::int64_t k);

}  // namespace feller::qs

#endif  // FELLER_QUASI_STATIONARY_HPP_
