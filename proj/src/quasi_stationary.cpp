#include "feller/quasi_stationary.hpp"

#include <cmath>
#include <limits>

#include "feller/error.hpp"
#include "feller/numerics.hpp"

namespace feller::qs {

using detail::require;

namespace {

void require_subcritical(double alpha) {
  require(std::isfinite(alpha) && alpha < 0.0,
          "quasi-stationary limit requires alpha < 0");
}

// n C(n-1, j-1) (1-r) int_0^1 r^{j-1} u^{j-1} (1-u)^{n-1} / (1 - u r)^{j+1} du
// with 1 - r supplied directly to keep precision as r -> 1.
double ancestor_integral(std::int64_t j, std::int64_t n, double one_minus_r,
                         const QuadratureSpec& quad) {
  const double r = 1.0 - one_minus_r;
  const auto dj = static_cast<double>(j);
  const auto dn = static_cast<double>(n);
  const double log_lead = std::log(dn) + log_binomial(n - 1, j - 1) +
                          std::log(one_minus_r) + (dj - 1.0) * std::log(r);
  auto integrand = [&](double u) {
    // 1 - u r = (1 - u) + u (1 - r)
    const double gap = (1.0 - u) + u * one_minus_r;
    const double log_value = (dj - 1.0) * std::log(u) +
                             (dn - 1.0) * std::log1p(-u) -
                             (dj + 1.0) * std::log(gap);
    return std::exp(log_lead + log_value);
  };
  // The integrand has a layer of width ~(1 - r) at u = 1.
  QuadratureSpec spec = quad;
  spec.singular_endpoints = {false, true};
  return integral(integrand, 0.0, 1.0, spec);
}

}  // namespace

double population_ancestors_pmf(std::int64_t k, double s, double alpha) {
  require_subcritical(alpha);
  require(s > 0.0, "population_ancestors_pmf: s must be > 0");
  require(k >= 1, "population_ancestors_pmf: k must be >= 1");
  const double a = -alpha;
  return -std::expm1(-a * s) * std::exp(-a * static_cast<double>(k - 1) * s);
}

double tk_survival(std::int64_t k, double s, double alpha) {
  require_subcritical(alpha);
  require(k >= 2, "tk_survival: k must be >= 2");
  require(s >= 0.0, "tk_survival: s must be >= 0");
  return std::exp(alpha * static_cast<double>(k - 1) * s);
}

double mean_wk(std::int64_t k, double alpha) {
  require_subcritical(alpha);
  require(k >= 2, "mean_wk: k must be >= 2");
  const auto dk = static_cast<double>(k);
  return 1.0 / (-alpha * dk * (dk - 1.0));
}

QuadratureSpec default_quadrature() {
  QuadratureSpec spec;
  spec.abs_tol = 1e-14;
  spec.rel_tol = 1e-11;
  spec.max_subdivisions = 4000;
  return spec;
}

double sample_ancestors_pmf(std::int64_t j, std::int64_t n, double s,
                            double alpha, const QuadratureSpec& quad) {
  require_subcritical(alpha);
  require(s > 0.0, "sample_ancestors_pmf: s must be > 0");
  require(n >= 1 && j >= 1 && j <= n,
          "sample_ancestors_pmf: require 1 <= j <= n");
  return ancestor_integral(j, n, -std::expm1(alpha * s), quad);
}

double wk_survival(double w, std::int64_t k, double alpha,
                   const QuadratureSpec& quad) {
  require_subcritical(alpha);
  require(k >= 2, "wk_survival: k must be >= 2");
  require(w >= 0.0, "wk_survival: w must be >= 0");
  if (w == 0.0) return 1.0;
  if (std::isinf(w)) return 0.0;
  return ancestor_integral(k, k, -std::expm1(alpha * w), quad);
}

double mutant_frequency_density(double u, std::int64_t k) {
  require(u > 0.0 && u < 1.0, "mutant_frequency_density: u must lie in (0, 1)");
  require(k >= 2, "mutant_frequency_density: k must be >= 2");
  const auto dk = static_cast<double>(k);
  return (dk - 1.0) * std::pow(1.0 - u, dk - 2.0);
}

}  // namespace feller::qs
