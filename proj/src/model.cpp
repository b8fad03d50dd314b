#include "feller/model.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

#include "feller/error.hpp"

namespace feller {

using detail::require;

ModelParams::ModelParams(double alpha_in, double x0_in)
    : alpha(alpha_in), x0(x0_in) {
  require(std::isfinite(alpha), "ModelParams: alpha must be finite");
  require(std::isfinite(x0) && x0 >= 0.0, "ModelParams: x0 must be >= 0");
}

Criticality ModelParams::criticality() const {
  if (alpha < 0.0) return Criticality::kSubcritical;
  if (alpha > 0.0) return Criticality::kSupercritical;
  return Criticality::kCritical;
}

TimeWindow::TimeWindow(double t_in, double s_in) : t(t_in), s(s_in) {
  require(std::isfinite(t) && t > 0.0, "TimeWindow: t must be positive");
  require(s > 0.0 && s <= t, "TimeWindow: require 0 < s <= t");
}

BgwScale::BgwScale(std::int64_t y0_in, double lambda_in, double sigma2_in,
                   std::int64_t m0_in)
    : y0(y0_in), lambda_offspring(lambda_in), sigma2(sigma2_in), m0(m0_in) {
  require(y0 >= 1, "BgwScale: y0 must be a positive integer");
  require(m0 >= 1 && m0 <= y0, "BgwScale: require 1 <= m0 <= y0");
  require(std::isfinite(lambda_offspring) && lambda_offspring > 0.0,
          "BgwScale: lambda_offspring must be positive");
  require(std::isfinite(sigma2) && sigma2 > 0.0,
          "BgwScale: sigma2 must be positive");
}

namespace {

void require_time(double t) {
  require(std::isfinite(t) && t > 0.0, "time argument must be positive");
}

}  // namespace

double mu(double t, double alpha) {
  require_time(t);
  const double y = alpha * t;
  if (std::abs(y) < kSmallAlphaT) {
    return 2.0 / t * (1.0 + y / 2.0 + y * y / 12.0);
  }
  if (alpha > 0.0) return 2.0 * alpha / -std::expm1(-y);
  // alpha < 0: 2|alpha| e^{-|alpha| t} / (1 - e^{-|alpha| t})
  return -2.0 * alpha * std::exp(y) / -std::expm1(y);
}

double log_mu(double t, double alpha) {
  require_time(t);
  const double y = alpha * t;
  if (std::abs(y) < kSmallAlphaT) {
    return std::log(2.0 / t) + std::log1p(y / 2.0 + y * y / 12.0);
  }
  if (alpha > 0.0) return std::log(2.0 * alpha) - std::log(-std::expm1(-y));
  return std::log(-2.0 * alpha) + y - std::log(-std::expm1(y));
}

double beta(double t, double alpha) {
  require_time(t);
  const double y = alpha * t;
  if (std::abs(y) < kSmallAlphaT) {
    return t / 2.0 * (1.0 + y / 2.0 + y * y / 6.0);
  }
  return std::expm1(y) / (2.0 * alpha);
}

double geom_p(double s, double t, double alpha) {
  require_time(t);
  require(s > 0.0 && s <= t, "geom_p: require 0 < s <= t");
  if (s == t) return 0.0;
  const double y = alpha * t;
  if (std::abs(y) < kSmallAlphaT) {
    const double num =
        (t - s) * (1.0 + alpha * (s + t) / 2.0 +
                   alpha * alpha * (s * s + s * t + t * t) / 6.0);
    const double den = t * (1.0 + y / 2.0 + y * y / 6.0);
    return num / den;
  }
  if (alpha > 0.0) return std::expm1(-alpha * (t - s)) / std::expm1(-y);
  return std::exp(alpha * s) * std::expm1(alpha * (t - s)) / std::expm1(y);
}

DensityValue population_density(double x, double t,
                                const ModelParams& params) {
  require(std::isfinite(x) && x >= 0.0, "population_density: x must be >= 0");
  require_time(t);
  if (params.x0 == 0.0) return {1.0, 0.0};

  const double nu = params.x0 * mu(t, params.alpha);
  const double b = beta(t, params.alpha);
  DensityValue out{std::exp(-nu), 0.0};

  // Founder count cutoff: Poisson(nu) mass beyond `last` below the tail bound.
  auto last = static_cast<long>(std::ceil(nu + 10.0 * std::sqrt(nu) + 30.0));
  while (boost::math::gamma_p(static_cast<double>(last + 1), nu) >=
         kPoissonSeriesTail) {
    last *= 2;
  }

  const double log_nu = std::log(nu);
  const double log_b = std::log(b);
  const double log_x = x > 0.0 ? std::log(x) : 0.0;
  double sum = 0.0;
  for (long l = 1; l <= last; ++l) {
    if (x == 0.0 && l > 1) break;
    const double dl = static_cast<double>(l);
    const double log_poisson = -nu + dl * log_nu - std::lgamma(dl + 1.0);
    const double log_gamma_density = (dl - 1.0) * log_x - dl * log_b -
                                     std::lgamma(dl) - x / b;
    sum += std::exp(log_poisson + log_gamma_density);
  }
  out.continuous_density = sum;
  return out;
}

double laplace_transform(double phi, double t, const ModelParams& params) {
  require(phi >= 0.0, "laplace_transform: phi must be >= 0");
  require_time(t);
  if (params.x0 == 0.0 || phi == 0.0) return 1.0;
  const double nu = params.x0 * mu(t, params.alpha);
  if (std::isinf(phi)) return std::exp(-nu);
  const double b = beta(t, params.alpha);
  // mu * beta = e^{alpha t}
  return std::exp(-phi * params.x0 * std::exp(params.alpha * t) /
                  (1.0 + phi * b));
}

double eventual_extinction_prob(const ModelParams& params) {
  if (params.alpha <= 0.0) return 1.0;
  return std::exp(-2.0 * params.alpha * params.x0);
}

ModelParams bgw_to_diffusion(const BgwScale& scale) {
  const double y0 = static_cast<double>(scale.y0);
  return ModelParams(y0 * std::log(scale.lambda_offspring) / scale.sigma2,
                     static_cast<double>(scale.m0) / y0);
}

BgwScale diffusion_to_bgw(const ModelParams& params, std::int64_t y0,
                          double sigma2) {
  require(y0 >= 1, "diffusion_to_bgw: y0 must be positive");
  const double dy0 = static_cast<double>(y0);
  const double lambda = std::exp(params.alpha * sigma2 / dy0);
  const auto m0 = static_cast<std::int64_t>(std::llround(params.x0 * dy0));
  return BgwScale(y0, lambda, sigma2, m0);
}

double generations_to_time(double generations, const BgwScale& scale) {
  require(generations >= 0.0, "generations must be >= 0");
  return scale.sigma2 * generations / static_cast<double>(scale.y0);
}

double time_to_generations(double t, const BgwScale& scale) {
  require(t >= 0.0, "time must be >= 0");
  return t * static_cast<double>(scale.y0) / scale.sigma2;
}

double bd_scale_from_bgw(const BgwScale& scale) {
  return 2.0 / static_cast<double>(scale.y0);
}

double physical_to_diffusion(double y, double s) {
  require(s > 0.0, "scale s must be positive");
  require(y >= 0.0, "physical population must be >= 0");
  return 0.5 * s * y;
}

double diffusion_to_physical(double x, double s) {
  require(s > 0.0, "scale s must be positive");
  require(x >= 0.0, "scaled population must be >= 0");
  return 2.0 * x / s;
}

double physical_to_diffusion(double y, const BgwScale& scale, double alpha) {
  require(alpha != 0.0, "offspring-law scale map needs alpha != 0");
  require(y >= 0.0, "physical population must be >= 0");
  return std::log(scale.lambda_offspring) / (alpha * scale.sigma2) * y;
}

double diffusion_to_physical(double x, const BgwScale& scale, double alpha) {
  require(alpha != 0.0, "offspring-law scale map needs alpha != 0");
  require(x >= 0.0, "scaled population must be >= 0");
  return x * alpha * scale.sigma2 / std::log(scale.lambda_offspring);
}

}  // namespace feller
