#include "feller/reconstructed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "feller/error.hpp"
#include "feller/model.hpp"
#include "feller/numerics.hpp"

namespace feller::rrp {

using detail::require;

namespace {

// (1 - e^{-y}) / y, continuous at y = 0.
double one_minus_exp_over(double y) {
  if (std::abs(y) < 1e-8) return 1.0 - y / 2.0;
  return -std::expm1(-y) / y;
}

// log(e^y - 1) for y > 0 without overflow.
double log_expm1(double y) {
  return y > 30.0 ? y + std::log1p(-std::exp(-y)) : std::log(std::expm1(y));
}

// log(1 + e^y)
double softplus(double y) {
  return y > 0.0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y));
}

void require_supercritical(double alpha) {
  require(std::isfinite(alpha) && alpha > 0.0,
          "the reversed reconstructed process requires alpha > 0");
}

void require_positive(double value, const char* message) {
  require(std::isfinite(value) && value > 0.0, message);
}

QuadratureSpec route_quadrature() {
  QuadratureSpec spec;
  spec.abs_tol = 1e-15;
  spec.rel_tol = 1e-11;
  spec.max_subdivisions = 4000;
  return spec;
}

}  // namespace

BdRates bd_rates(double s, double alpha) {
  require_positive(s, "bd_rates: s must be > 0");
  require(std::isfinite(alpha), "bd_rates: alpha must be finite");
  // lambda_hat = alpha / (1 - e^{-alpha s}) = 1 / (s g(alpha s))
  const double lambda_hat = 1.0 / (s * one_minus_exp_over(alpha * s));
  // mu_hat = lambda_hat e^{-alpha s} = 1 / (s g(-alpha s))
  const double mu_hat = 1.0 / (s * one_minus_exp_over(-alpha * s));
  return {lambda_hat, mu_hat, s, alpha};
}

double bd_b(double u, const BdRates& rates) {
  require(u >= 0.0, "bd_b: u must be >= 0");
  if (u == 0.0) return 0.0;
  const double d = rates.alpha;
  const double du = d * u;
  // B = expm1(du) / (d + lambda_hat expm1(du)) = 1 / (lambda_hat + d /
  // expm1(du)), with d / expm1(du) -> 1/u as d -> 0.
  const double ratio =
      std::abs(du) < 1e-8 ? (1.0 - du / 2.0) / u : d / std::expm1(du);
  return 1.0 / (rates.lambda_hat + ratio);
}

double lambda_eff(double u, double horizon, const BdRates& rates) {
  require(u >= 0.0 && u <= horizon, "lambda_eff: require 0 <= u <= horizon");
  const double h = horizon - u;
  const double d = rates.alpha;
  // lambda_hat d / (lambda_hat - mu_hat e^{-d h})
  return rates.lambda_hat / (1.0 + rates.mu_hat * h * one_minus_exp_over(d * h));
}

double lambda_coal(double u, double t, double alpha) {
  require(std::isfinite(alpha), "lambda_coal: alpha must be finite");
  require(u >= 0.0 && u < t, "lambda_coal: require 0 <= u < t");
  const double h = t - u;
  return 1.0 / (h * one_minus_exp_over(alpha * h));
}

double mu_eff(double tau, double alpha) {
  require_supercritical(alpha);
  require_positive(tau, "mu_eff: tau must be > 0");
  return 1.0 / (tau * one_minus_exp_over(alpha * tau));
}

double rho_of_tau(double tau, double s, double alpha) {
  require_supercritical(alpha);
  require_positive(s, "rho_of_tau: s must be > 0");
  require(tau >= s && std::isfinite(tau), "rho_of_tau: require tau >= s");
  if (tau == s) return 0.0;
  return log_expm1(alpha * tau) - log_expm1(alpha * s);
}

double tau_of_rho(double rho, double s, double alpha) {
  require_supercritical(alpha);
  require_positive(s, "tau_of_rho: s must be > 0");
  require(rho >= 0.0 && std::isfinite(rho), "tau_of_rho: require rho >= 0");
  if (rho == 0.0) return s;
  return softplus(log_expm1(alpha * s) + rho) / alpha;
}

double cumulative_intensity(double tau, double x, double alpha) {
  require_supercritical(alpha);
  require_positive(tau, "cumulative_intensity: tau must be > 0");
  require_positive(x, "cumulative_intensity: x must be > 0");
  return 2.0 * alpha * x / std::expm1(alpha * tau);
}

double inverse_cumulative_intensity(double value, double x, double alpha) {
  require_supercritical(alpha);
  require_positive(value, "inverse_cumulative_intensity: value must be > 0");
  require_positive(x, "inverse_cumulative_intensity: x must be > 0");
  return std::log1p(2.0 * alpha * x / value) / alpha;
}

double coalescent_rate(double tau, double x, double alpha) {
  // Lambda(tau) * mu_eff(tau)
  return cumulative_intensity(tau, x, alpha) * mu_eff(tau, alpha);
}

double deficit_mass(double tau, double x, double alpha) {
  return std::exp(-cumulative_intensity(tau, x, alpha));
}

double ancestors_at_tau_pmf(std::int64_t j, double tau, double x,
                            double alpha) {
  require(j >= 1, "ancestors_at_tau_pmf: j must be >= 1");
  const double lambda = cumulative_intensity(tau, x, alpha);
  if (lambda == 0.0) return 0.0;
  const auto dj = static_cast<double>(j);
  return std::exp(dj * std::log(lambda) - lambda - std::lgamma(dj + 1.0));
}

DiscretePmf ancestors_at_tau_table(double tau, double x, double alpha,
                                   double tail_tol) {
  require(tail_tol > 0.0, "ancestors_at_tau_table: tail_tol must be > 0");
  const double lambda = cumulative_intensity(tau, x, alpha);
  DiscretePmf out;
  out.support_start = 1;
  out.total_mass = -std::expm1(-lambda);
  double cumulative = 0.0;
  for (std::int64_t j = 1;; ++j) {
    const double pj = ancestors_at_tau_pmf(j, tau, x, alpha);
    out.probabilities.push_back(pj);
    cumulative += pj;
    if (static_cast<double>(j) > lambda && out.total_mass - cumulative < tail_tol) {
      break;
    }
  }
  out.truncation_tail_bound = std::max(0.0, out.total_mass - cumulative);
  return out;
}

double sample_ancestors_pmf_at_intensity(std::int64_t j, std::int64_t n,
                                         double intensity, SampleForm form) {
  require(n >= 1 && j >= 1, "sample_ancestors_pmf: require n, j >= 1");
  require(j <= n, "sample_ancestors_pmf: j cannot exceed the sample size n");
  require(intensity >= 0.0 && std::isfinite(intensity),
          "sample_ancestors_pmf: intensity must be finite and >= 0");
  if (intensity == 0.0) return 0.0;
  const auto dj = static_cast<double>(j);
  const auto dn = static_cast<double>(n);
  const double log_lambda = std::log(intensity);

  if (form == SampleForm::kSeries) {
    // n_[j] / (n_(j) j!) Lambda^j e^{-Lambda} M(j, j + n, Lambda)
    const double log_value = log_falling_factorial(n, j) -
                             log_rising_factorial(n, j) - std::lgamma(dj + 1.0) +
                             dj * log_lambda - intensity +
                             log_kummer_m(dj, dj + dn, intensity);
    return std::exp(log_value);
  }

  // C(n, j) / (j-1)! Lambda^j int_0^1 e^{-(1-v) Lambda} v^{j-1} (1-v)^{n-1} dv
  const double log_lead =
      log_binomial(n, j) - std::lgamma(dj) + dj * log_lambda;
  auto integrand = [&](double v) {
    return std::exp(log_lead - (1.0 - v) * intensity +
                    (dj - 1.0) * std::log(v) + (dn - 1.0) * std::log1p(-v));
  };
  QuadratureSpec spec = route_quadrature();
  // Mass concentrates in a layer of width 1/Lambda at v = 1.
  spec.singular_endpoints = {false, true};
  return integral(integrand, 0.0, 1.0, spec);
}

double sample_ancestors_at_tau_pmf(std::int64_t j, std::int64_t n, double tau,
                                   double x, double alpha, SampleForm form) {
  return sample_ancestors_pmf_at_intensity(
      j, n, cumulative_intensity(tau, x, alpha), form);
}

double mean_inter_coalescent_sample(std::int64_t j, std::int64_t n, double x,
                                    double alpha, MeanRoute route) {
  require_supercritical(alpha);
  require_positive(x, "mean_inter_coalescent_sample: x must be > 0");
  require(j >= 2 && j <= n, "mean_inter_coalescent_sample: require 2 <= j <= n");
  const auto dj = static_cast<double>(j);
  const auto dn = static_cast<double>(n);

  if (route == MeanRoute::kTimeIntegral) {
    auto integrand = [&](double tau) {
      if (tau <= 0.0) return j == n ? 1.0 : 0.0;
      return sample_ancestors_at_tau_pmf(j, n, tau, x, alpha, SampleForm::kSeries);
    };
    return integral(integrand, 0.0, std::numeric_limits<double>::infinity(),
                    route_quadrature());
  }

  // Substituting y = 2 alpha x (1 - v) u in the inner integral folds the
  // prefactor into 2 x and leaves
  //   E[W_j] = 2 x C(n, j) / (j-1)! int_0^1 v^{j-1} (1-v)^{n-j} J(c) dv,
  //   J(c) = int_0^inf y^{j-1} e^{-y} / (c + y) dy,  c = 2 alpha x (1 - v).
  const double log_lead = std::log(2.0 * x) + log_binomial(n, j) - std::lgamma(dj);
  const QuadratureSpec inner_spec = route_quadrature();
  auto inner = [&](double c) {
    auto f = [&](double y) {
      if (y <= 0.0) return 0.0;
      return std::exp((dj - 1.0) * std::log(y) - y) / (c + y);
    };
    return integral(f, 0.0, std::numeric_limits<double>::infinity(), inner_spec);
  };
  auto outer = [&](double v) {
    const double c = 2.0 * alpha * x * (1.0 - v);
    return std::exp(log_lead + (dj - 1.0) * std::log(v) +
                    (dn - dj) * std::log1p(-v)) *
           inner(c);
  };
  QuadratureSpec outer_spec = route_quadrature();
  outer_spec.rel_tol = 1e-10;
  // J has a c log c term at v = 1.
  outer_spec.singular_endpoints = {false, true};
  return integral(outer, 0.0, 1.0, outer_spec);
}

}  // namespace feller::rrp
