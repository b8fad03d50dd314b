#ifndef FELLER_RECONSTRUCTED_HPP_
#define FELLER_RECONSTRUCTED_HPP_

// The Feller coalescent tree as the s -> 0 limit of the reconstructed
// process of a linear birth-death process, and the coalescent-time laws of
// the reversed reconstructed process (RRP) of a supercritical diffusion.
//
// Conventions:
//  * tau is time measured back from the present.
//  * x is the current scaled population; it is independent of x0.
//  * N(tau) counts the points of the coalescent-time point process lying
//    above tau. The points are the coalescence times of the single-founder
//    tree together with the founder's own origin, so N(tau) is the number of
//    ancestral lineages alive at tau and N(tau) = 0 means tau predates the
//    founder. P(N(tau) = 0) = exp(-x / beta(tau)) is the mass the
//    j = 1, 2, ... formulas leave out; see deficit_mass().

#include <cstdint>

#include "feller/ancestry.hpp"
#include "feller/quadrature.hpp"

namespace feller::rrp {

// Birth and death rates of the linear BD process whose reconstructed
// process reproduces the Feller coalescent at scale s:
//   lambda_hat = alpha / (1 - e^{-alpha s}),
//   mu_hat = alpha e^{-alpha s} / (1 - e^{-alpha s}),
// with lambda_hat = mu_hat = 1/s at alpha = 0.
struct BdRates {
  double lambda_hat;
  double mu_hat;
  double s;
  // lambda_hat - mu_hat, kept exactly: the subtraction cancels badly for
  // small s.
  double alpha;
};

BdRates bd_rates(double s, double alpha);

// Feller's B(u) for a linear BD process: the single-founder law is
// P(M(u) = 0) = mu_hat B(u), and (M(u) | M(u) > 0) ~ ShiftedGeom(lambda_hat
// B(u)).
double bd_b(double u, const BdRates& rates);

// Birth rate at time u of the reconstructed process of a BD process stopped
// at time horizon (0 <= u <= horizon).
double lambda_eff(double u, double horizon, const BdRates& rates);

// Birth rate of the Feller coalescent tree at time u since initiation,
// alpha / (1 - e^{-alpha (t - u)}); valid for any alpha, 0 <= u < t.
double lambda_coal(double u, double t, double alpha);

// Death rate of the RRP at tau back from the present, alpha / (1 -
// e^{-alpha tau}). Requires alpha > 0.
double mu_eff(double tau, double alpha);

// rho_s(tau) = log[(e^{alpha tau} - 1) / (e^{alpha s} - 1)], the clock in
// which the RRP is a rate-1 pure-death process, and its inverse.
double rho_of_tau(double tau, double s, double alpha);
double tau_of_rho(double rho, double s, double alpha);

// Lambda(tau) = x / beta(tau) = 2 alpha x / (e^{alpha tau} - 1): the expected
// number of point-process points above tau.
double cumulative_intensity(double tau, double x, double alpha);
// Solves Lambda(tau) = value: tau = log(1 + 2 alpha x / value) / alpha.
double inverse_cumulative_intensity(double value, double x, double alpha);
// Point-process rate d/dtau[-x / beta(tau)] = 2 x alpha^2 e^{alpha tau} /
// (e^{alpha tau} - 1)^2.
double coalescent_rate(double tau, double x, double alpha);

// exp(-x / beta(tau)), the probability that tau predates the founder.
double deficit_mass(double tau, double x, double alpha);

// P(N(tau) = j) = Lambda^j e^{-Lambda} / j!, j >= 1.
double ancestors_at_tau_pmf(std::int64_t j, double tau, double x,
                            double alpha);
// The law of N(tau) on j >= 1 (total mass 1 - deficit_mass).
DiscretePmf ancestors_at_tau_table(double tau, double x, double alpha,
                                   double tail_tol = kDefaultTailTolerance);

enum class SampleForm { kSeries, kIntegral };

// P(N_n(tau) = j) for a sample of n, 1 <= j <= n. The series form uses
// Kummer's M(j, j + n, Lambda); the integral form integrates
// exp{-(1-v) Lambda} v^{j-1} (1-v)^{n-1} over (0, 1). Both sum over j to
// 1 - deficit_mass.
double sample_ancestors_at_tau_pmf(std::int64_t j, std::int64_t n, double tau,
                                   double x, double alpha,
                                   SampleForm form = SampleForm::kSeries);
// Same, parameterised by Lambda = x / beta(tau) directly.
double sample_ancestors_pmf_at_intensity(std::int64_t j, std::int64_t n,
                                         double intensity, SampleForm form);

enum class MeanRoute {
  // 2 (2 alpha)^{j-1} x^j / (j-1)! C(n, j) int_0^1 v^{j-1} (1-v)^{n-1}
  //   int_0^inf u^{j-1} / (1 + u) e^{-2 alpha x (1-v) u} du dv
  kDoubleIntegral,
  // int_0^inf P(N_n(tau) = j) dtau with the Kummer series integrand
  kTimeIntegral,
};

// E[W_j^{(n)}], the mean time a sample of n spends with j ancestors, 2 <= j
// <= n.
double mean_inter_coalescent_sample(std::int64_t j, std::int64_t n, double x,
                                    double alpha,
                                    MeanRoute route = MeanRoute::kDoubleIntegral);

}  // namespace feller::rrp

#endif  // FELLER_RECONSTRUCTED_HPP_
