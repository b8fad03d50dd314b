#ifndef FELLER_MODEL_HPP_
#define FELLER_MODEL_HPP_

// Feller diffusion parameters, the elementary functions mu/beta/p, Feller's
// transition law and the maps between diffusion units and the units of the
// underlying discrete branching process.

#include <cstdint>

namespace feller {

enum class Criticality { kSubcritical, kCritical, kSupercritical };

// Drift alpha (per unit scaled time, any sign) and initial scaled population.
struct ModelParams {
  ModelParams(double alpha, double x0);

  double alpha;
  double x0;

  Criticality criticality() const;
};

// Current time t since initiation and lookback s, 0 < s <= t.
struct TimeWindow {
  TimeWindow(double t, double s);

  double t;
  double s;
};

// Physical parameters of a near-critical Bienayme-Galton-Watson process.
struct BgwScale {
  BgwScale(std::int64_t y0, double lambda_offspring, double sigma2,
           std::int64_t m0);

  std::int64_t y0;          // initial total population
  double lambda_offspring;  // mean offspring per parent
  double sigma2;            // offspring variance
  std::int64_t m0;          // tracked subpopulation, m0 <= y0
};

// Below this |alpha * t| the alpha = 0 branch (second-order series) is used.
inline constexpr double kSmallAlphaT = 1e-6;

// 2 alpha e^{alpha t} / (e^{alpha t} - 1); 2/t at alpha = 0.
double mu(double t, double alpha);
// log mu(t; alpha). Finite even where mu itself underflows (alpha t << 0).
double log_mu(double t, double alpha);
// (e^{alpha t} - 1) / (2 alpha); t/2 at alpha = 0.
double beta(double t, double alpha);
// (e^{alpha s} - e^{alpha t}) / (1 - e^{alpha t}), the shifted-geometric
// parameter of the ancestor-count law. Requires 0 < s <= t.
double geom_p(double s, double t, double alpha);

// Feller's density of X(t) split into the extinction atom at zero and the
// continuous Poisson-Gamma mixture at x.
struct DensityValue {
  double atom_mass;
  double continuous_density;
};

// Poisson tail mass below which the founder-count series is cut.
inline constexpr double kPoissonSeriesTail = 1e-14;

DensityValue population_density(double x, double t, const ModelParams& params);

// E[exp(-phi X(t))]. phi may be +infinity (returns the extinction atom).
double laplace_transform(double phi, double t, const ModelParams& params);

// exp(-2 alpha x0) for alpha > 0, exactly 1 otherwise.
double eventual_extinction_prob(const ModelParams& params);

// Scale maps between the BGW process and the diffusion.
ModelParams bgw_to_diffusion(const BgwScale& scale);
// Inverse of bgw_to_diffusion for given y0 and sigma2: recovers lambda and m0
// (m0 rounded to the nearest integer).
BgwScale diffusion_to_bgw(const ModelParams& params, std::int64_t y0,
                          double sigma2);
// Scaled time t = sigma2 * generations / y0, and its inverse.
double generations_to_time(double generations, const BgwScale& scale);
double time_to_generations(double t, const BgwScale& scale);
// BD scale s matched to a BGW population: s = 2 / y0.
double bd_scale_from_bgw(const BgwScale& scale);
// x = s y / 2, mapping physical counts y to scaled populations x and back.
double physical_to_diffusion(double y, double s);
double diffusion_to_physical(double x, double s);
// Same maps expressed through the offspring law: x = log(lambda) y /
// (alpha sigma2). Requires alpha != 0.
double physical_to_diffusion(double y, const BgwScale& scale, double alpha);
double diffusion_to_physical(double x, const BgwScale& scale, double alpha);

}  // namespace feller

#endif  // FELLER_MODEL_HPP_
