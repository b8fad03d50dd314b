#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "feller/error.hpp"
#include "feller/model.hpp"
#include "feller/quadrature.hpp"

namespace feller {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(ModelParams, ClassifiesCriticality) {
  EXPECT_EQ(ModelParams(-0.1, 1.0).criticality(), Criticality::kSubcritical);
  EXPECT_EQ(ModelParams(0.0, 1.0).criticality(), Criticality::kCritical);
  EXPECT_EQ(ModelParams(0.3, 1.0).criticality(), Criticality::kSupercritical);
}

TEST(ModelParams, RejectsInvalidFields) {
  EXPECT_THROW(ModelParams(0.0, -1.0), DomainError);
  EXPECT_THROW(ModelParams(kInf, 1.0), DomainError);
  EXPECT_THROW(TimeWindow(1.0, 0.0), DomainError);
  EXPECT_THROW(TimeWindow(1.0, 1.5), DomainError);
  EXPECT_NO_THROW(TimeWindow(1.0, 1.0));
}

TEST(Mu, CriticalValues) {
  EXPECT_DOUBLE_EQ(mu(1.0, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(mu(2.0, 0.0), 1.0);
  EXPECT_NEAR(mu(1.0, 1e-8), 2.0, 2e-6);
}

TEST(Beta, CriticalValues) {
  EXPECT_DOUBLE_EQ(beta(1.0, 0.0), 0.5);
  EXPECT_NEAR(beta(1.0, -1e-8), 0.5, 0.5e-6);
}

TEST(MuBeta, ProductIsGrowthFactor) {
  for (auto [t, alpha] : {std::pair{1.0, 1.0}, {2.0, -0.5}, {3.0, 0.0}, {50.0, -3.0},
                          {40.0, 5.0}, {1e-3, 1e-5}}) {
    EXPECT_NEAR(mu(t, alpha) * beta(t, alpha) / std::exp(alpha * t), 1.0, 1e-12)
        << "t=" << t << " alpha=" << alpha;
  }
}

TEST(MuBeta, ContinuousAcrossZeroAlpha) {
  for (double eps : {1e-7, 1e-6}) {
    EXPECT_LE(std::abs(mu(1.3, eps) - mu(1.3, 0.0)), 2.0 * eps);
    EXPECT_LE(std::abs(mu(1.3, -eps) - mu(1.3, 0.0)), 2.0 * eps);
    EXPECT_LE(std::abs(beta(1.3, eps) - beta(1.3, 0.0)), 2.0 * eps);
    EXPECT_LE(std::abs(beta(1.3, -eps) - beta(1.3, 0.0)), 2.0 * eps);
  }
}

TEST(MuBeta, RejectNonPositiveTime) {
  EXPECT_THROW(mu(0.0, 1.0), DomainError);
  EXPECT_THROW(beta(-1.0, 1.0), DomainError);
}

TEST(GeomP, BoundaryAndLimits) {
  for (double alpha : {-2.0, 0.0, 0.7}) {
    EXPECT_EQ(geom_p(1.0, 1.0, alpha), 0.0);
  }
  EXPECT_NEAR(geom_p(1e-9, 1.0, 1.0), 1.0, 1e-8);
  EXPECT_NEAR(geom_p(0.25, 1.0, 0.0), 0.75, 1e-15);
  EXPECT_NEAR(geom_p(0.25, 1.0, 1e-8), 0.75, 1e-8);
  EXPECT_NEAR(geom_p(0.25, 1.0, -1e-8), 0.75, 1e-8);
}

TEST(GeomP, InUnitIntervalAndDecreasingInS) {
  for (double alpha : {-3.0, -0.2, 0.0, 0.4, 6.0}) {
    double previous = 1.0;
    for (double s = 0.05; s <= 2.0; s += 0.05) {
      const double p = geom_p(s, 2.0, alpha);
      EXPECT_GE(p, 0.0);
      EXPECT_LT(p, 1.0);
      EXPECT_LE(p, previous);
      previous = p;
    }
  }
}

TEST(GeomP, RejectsInvalidWindow) {
  EXPECT_THROW(geom_p(0.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(geom_p(1.5, 1.0, 1.0), DomainError);
}

TEST(PopulationDensity, AtomIsExtinctionProbability) {
  const DensityValue v = population_density(1.0, 1.0, ModelParams(0.0, 1.0));
  EXPECT_NEAR(v.atom_mass, std::exp(-2.0), 1e-15);
}

TEST(PopulationDensity, EmptyPopulation) {
  const DensityValue v = population_density(0.7, 1.0, ModelParams(0.3, 0.0));
  EXPECT_EQ(v.atom_mass, 1.0);
  EXPECT_EQ(v.continuous_density, 0.0);
}

TEST(PopulationDensity, MassSumsToOne) {
  for (auto [t, alpha, x0] : {std::tuple{1.0, 0.5, 2.0}, {0.5, -1.0, 1.0}, {2.0, 0.0, 0.3},
                              {1.0, 2.0, 5.0}}) {
    const ModelParams params(alpha, x0);
    QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    const double continuous = integral(
        [&](double x) { return population_density(x, t, params).continuous_density; },
        0.0, kInf, spec);
    EXPECT_NEAR(population_density(0.0, t, params).atom_mass + continuous, 1.0, 1e-8)
        << "t=" << t << " alpha=" << alpha << " x0=" << x0;
  }
}

TEST(LaplaceTransform, Limits) {
  const ModelParams params(0.0, 1.0);
  EXPECT_EQ(laplace_transform(0.0, 1.0, params), 1.0);
  EXPECT_NEAR(laplace_transform(kInf, 1.0, params), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(laplace_transform(1e12, 1.0, params), std::exp(-2.0), 1e-10);
  EXPECT_THROW(laplace_transform(-1.0, 1.0, params), DomainError);
}

TEST(LaplaceTransform, MatchesTransformOfDensity) {
  const double phi = 1.3;
  const double t = 1.0;
  const ModelParams params(0.7, 0.9);
  const double continuous = integral(
      [&](double x) {
        return std::exp(-phi * x) * population_density(x, t, params).continuous_density;
      },
      0.0, kInf);
  const double atom = population_density(0.0, t, params).atom_mass;
  EXPECT_NEAR(atom + continuous, laplace_transform(phi, t, params), 1e-6);
}

TEST(LaplaceTransform, DecreasingInPhi) {
  const ModelParams params(-0.4, 2.0);
  double previous = 1.0;
  for (double phi = 0.1; phi < 20.0; phi *= 1.5) {
    const double value = laplace_transform(phi, 1.5, params);
    EXPECT_LT(value, previous);
    previous = value;
  }
}

TEST(LaplaceTransform, MeanFromDerivative) {
  const double t = 1.2;
  const ModelParams params(0.6, 1.4);
  const double h = 1e-6;
  // psi = -log L; mean = psi'(0), one-sided difference from phi = 0.
  const double psi_h = -std::log(laplace_transform(h, t, params));
  const double psi_2h = -std::log(laplace_transform(2.0 * h, t, params));
  const double derivative = (4.0 * psi_h - psi_2h) / (2.0 * h);
  EXPECT_NEAR(derivative, params.x0 * std::exp(params.alpha * t), 1e-6);
}

TEST(EventualExtinction, Values) {
  EXPECT_EQ(eventual_extinction_prob(ModelParams(-1.0, 5.0)), 1.0);
  EXPECT_EQ(eventual_extinction_prob(ModelParams(0.0, 5.0)), 1.0);
  EXPECT_EQ(eventual_extinction_prob(ModelParams(0.8, 0.0)), 1.0);
  EXPECT_NEAR(eventual_extinction_prob(ModelParams(0.5, 1.0)), std::exp(-1.0), 1e-15);
}

TEST(EventualExtinction, IsLongTimeAtom) {
  const ModelParams params(0.5, 1.0);
  EXPECT_NEAR(population_density(0.0, 1000.0, params).atom_mass,
              eventual_extinction_prob(params), 1e-12);
}

TEST(ScaleMaps, BgwToDiffusion) {
  EXPECT_DOUBLE_EQ(bgw_to_diffusion(BgwScale(1000, 1.1, 1.0, 1000)).x0, 1.0);
  EXPECT_EQ(bgw_to_diffusion(BgwScale(700, 1.0, 2.5, 10)).alpha, 0.0);
}

TEST(ScaleMaps, RoundTrip) {
  const ModelParams params(0.75, 0.4);
  const BgwScale scale = diffusion_to_bgw(params, 5000, 1.3);
  const ModelParams back = bgw_to_diffusion(scale);
  EXPECT_NEAR(back.alpha, params.alpha, 1e-12);
  EXPECT_NEAR(back.x0, params.x0, 1e-15);
  EXPECT_NEAR(generations_to_time(time_to_generations(2.5, scale), scale), 2.5, 1e-14);
}

TEST(ScaleMaps, BdScaleMatchesPopulationScale) {
  const BgwScale scale(500, 1.002, 1.0, 100);
  const double s = bd_scale_from_bgw(scale);
  EXPECT_DOUBLE_EQ(s, 2.0 / 500.0);
  EXPECT_NEAR(physical_to_diffusion(800.0, s), 1.6, 1e-14);
  EXPECT_NEAR(diffusion_to_physical(1.6, s), 800.0, 1e-10);
}

TEST(ScaleMaps, OffspringFormMatchesPopulationScale) {
  // With alpha defined from the scale, x = log(lambda) / (alpha sigma^2) y = y / y0.
  const BgwScale scale(500, 1.002, 1.5, 100);
  const double alpha = bgw_to_diffusion(scale).alpha;
  EXPECT_NEAR(physical_to_diffusion(800.0, scale, alpha), 800.0 / 500.0, 1e-12);
  EXPECT_NEAR(diffusion_to_physical(1.6, scale, alpha), 800.0, 1e-9);
  EXPECT_THROW(physical_to_diffusion(1.0, scale, 0.0), DomainError);
}

TEST(ScaleMaps, RejectInvalidScales) {
  EXPECT_THROW(BgwScale(0, 1.0, 1.0, 0), DomainError);
  EXPECT_THROW(BgwScale(10, 1.0, 1.0, 11), DomainError);
  EXPECT_THROW(BgwScale(10, 0.0, 1.0, 1), DomainError);
  EXPECT_THROW(BgwScale(10, 1.0, 0.0, 1), DomainError);
  EXPECT_THROW(physical_to_diffusion(1.0, 0.0), DomainError);
}

}  // namespace
}  // namespace feller
