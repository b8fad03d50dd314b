#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include <gtest/gtest.h>

#include "feller/ancestry.hpp"
#include "feller/error.hpp"
#include "feller/model.hpp"
#include "feller/quadrature.hpp"
#include "feller/quasi_stationary.hpp"
#include "feller/verify/oracles.hpp"

namespace feller {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(AncestorParams, PoissonCaseAtFullLookback) {
  const PolyaAeppliParams pa = ancestor_params(TimeWindow(1.0, 1.0), ModelParams(0.0, 1.0));
  EXPECT_DOUBLE_EQ(pa.nu, 2.0);
  EXPECT_EQ(pa.p, 0.0);
  EXPECT_EQ(ancestor_params(TimeWindow(3.0, 3.0), ModelParams(0.4, 0.2)).p, 0.0);
}

TEST(AncestorParams, CriticalGeometricParameter) {
  const PolyaAeppliParams pa = ancestor_params(TimeWindow(1.0, 0.25), ModelParams(0.0, 1.0));
  EXPECT_NEAR(pa.p, 0.75, 1e-15);
}

TEST(AncestorParams, RejectsEmptyPopulation) {
  EXPECT_THROW(ancestor_params(TimeWindow(1.0, 0.5), ModelParams(0.3, 0.0)), DomainError);
}

TEST(PopulationAncestors, AtomsAtZero) {
  const TimeWindow window(1.0, 0.5);
  const ModelParams params(0.8, 1.2);
  EXPECT_NEAR(population_ancestors_pmf(0, window, params, false),
              std::exp(-params.x0 * mu(window.t, params.alpha)), 1e-15);
  EXPECT_EQ(population_ancestors_pmf(0, window, params, true), 0.0);
}

TEST(PopulationAncestors, FullLookbackIsPoisson) {
  const TimeWindow window(1.5, 1.5);
  const ModelParams params(-0.3, 0.8);
  const double nu = params.x0 * mu(window.t, params.alpha);
  for (int k = 0; k < 15; ++k) {
    const double poisson = std::exp(k * std::log(nu) - nu - std::lgamma(k + 1.0));
    EXPECT_NEAR(population_ancestors_pmf(k, window, params, false), poisson, 1e-12);
  }
}

TEST(PopulationAncestors, TablesNormalisedWithKnownMean) {
  const TimeWindow window(1.0, 0.4);
  const ModelParams params(0.6, 1.5);
  for (bool conditioned : {false, true}) {
    const DiscretePmf table = population_ancestors_table(window, params, conditioned);
    EXPECT_NEAR(table.listed_mass(), 1.0, 1e-10);
    EXPECT_LE(table.total_mass - table.listed_mass(), table.truncation_tail_bound + 1e-15);
  }
  const DiscretePmf table = population_ancestors_table(window, params, false);
  const double expected_mean = params.x0 * std::exp(params.alpha * (window.t - window.s)) *
                               mu(window.s, params.alpha);
  EXPECT_NEAR(table.mean(), expected_mean, 1e-8);
}

TEST(SubsampleLaw, SmallCases) {
  for (std::int64_t k = 1; k < 10; ++k) EXPECT_NEAR(sample_given_population_pmf(1, 1, k), 1.0, 1e-14);
  EXPECT_NEAR(sample_given_population_pmf(1, 2, 2), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(sample_given_population_pmf(2, 2, 2), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(sample_given_population_fraction(1, 2, 2), (Fraction{2, 3}));
}

TEST(SubsampleLaw, MatchesCompositionEnumeration) {
  const auto counts = oracle::composition_counts(4, 3);
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  for (std::int64_t j = 1; j <= 3; ++j) {
    EXPECT_NEAR(sample_given_population_pmf(j, 4, 3), counts[j] / total, 1e-15);
  }
  EXPECT_EQ(sample_given_population_pmf(4, 4, 3), 0.0);
}

TEST(SubsampleLaw, ExactRationalNormalisation) {
  for (std::int64_t n = 1; n <= 20; ++n) {
    for (std::int64_t k = 1; k <= 20; ++k) {
      // Sum over the lcm of the reduced denominators in 128-bit integers.
      std::uint64_t lcm = 1;
      for (std::int64_t j = 1; j <= std::min(n, k); ++j) {
        lcm = std::lcm(lcm, sample_given_population_fraction(j, n, k).denominator);
      }
      unsigned __int128 numerator = 0;
      for (std::int64_t j = 1; j <= std::min(n, k); ++j) {
        const Fraction f = sample_given_population_fraction(j, n, k);
        numerator += static_cast<unsigned __int128>(f.numerator) * (lcm / f.denominator);
      }
      EXPECT_TRUE(numerator == lcm) << "n=" << n << " k=" << k;
    }
  }
}

TEST(SubsampleLaw, ErrorPaths) {
  EXPECT_THROW(sample_given_population_pmf(3, 2, 5), DomainError);
  EXPECT_THROW(sample_given_population_pmf(0, 2, 5), DomainError);
  EXPECT_THROW(sample_given_population_pmf(1, 0, 5), DomainError);
  EXPECT_THROW(sample_given_population_pmf(1, 2, 0), DomainError);
}

TEST(SampleAncestors, SingleSample) {
  EXPECT_NEAR(sample_ancestors_pmf(1, 1, TimeWindow(1.0, 0.5), ModelParams(0.4, 1.0)), 1.0,
              1e-12);
}

TEST(SampleAncestors, Normalised) {
  const DiscretePmf table =
      sample_ancestors_table(6, TimeWindow(1.0, 0.3), ModelParams(-0.5, 2.0));
  EXPECT_EQ(table.support_start, 1);
  EXPECT_EQ(table.support_end(), 7);
  EXPECT_NEAR(table.listed_mass(), 1.0, 1e-10);
}

TEST(SampleAncestors, LargeSampleApproachesPopulation) {
  // The gap is O(E[A (A - 1)] / n): a family is missed by the sample with
  // probability about k / n. Small nu keeps it under 1e-3 at n = 200.
  const TimeWindow window(1.0, 1.0);
  const ModelParams params(0.0, 0.05);
  const DiscretePmf sample = sample_ancestors_table(200, window, params);
  for (std::int64_t k = 1; k <= 10; ++k) {
    EXPECT_NEAR(sample.at(k), population_ancestors_pmf(k, window, params, true), 1e-3) << k;
  }
}

TEST(SampleAncestors, GapShrinksLikeOneOverN) {
  const TimeWindow window(1.0, 0.3);
  const ModelParams params(0.2, 1.0);
  auto gap = [&](std::int64_t n) {
    const DiscretePmf sample = sample_ancestors_table(n, window, params);
    double worst = 0.0;
    for (std::int64_t k = 1; k <= 10; ++k) {
      worst = std::max(worst, std::abs(sample.at(k) - population_ancestors_pmf(k, window, params, true)));
    }
    return worst;
  };
  const double at_200 = gap(200);
  const double at_2000 = gap(2000);
  EXPECT_LT(at_2000, at_200 / 5.0);
  EXPECT_LT(at_2000, 1e-3);
}

TEST(SampleAncestors, RejectsOutOfRange) {
  EXPECT_THROW(sample_ancestors_pmf(4, 3, TimeWindow(1.0, 0.5), ModelParams(0.1, 1.0)),
               DomainError);
}

TEST(QuasiStationary, PopulationLaw) {
  const double alpha = -1.0;
  const double s = std::log(2.0);
  EXPECT_NEAR(qs::population_ancestors_pmf(1, s, alpha), 0.5, 1e-15);
  double mass = 0.0;
  for (int k = 1; k < 200; ++k) mass += qs::population_ancestors_pmf(k, s, alpha);
  EXPECT_NEAR(mass, 1.0, 1e-14);
  EXPECT_THROW(qs::population_ancestors_pmf(1, s, 0.0), DomainError);
  EXPECT_THROW(qs::population_ancestors_pmf(1, s, 0.5), DomainError);
}

TEST(QuasiStationary, IsLongTimeLimit) {
  const TimeWindow window(1000.0, 0.5);
  const ModelParams params(-1.0, 1.0);
  for (int k = 1; k < 10; ++k) {
    EXPECT_NEAR(population_ancestors_pmf(k, window, params, true),
                qs::population_ancestors_pmf(k, 0.5, -1.0), 1e-6);
  }
}

TEST(QuasiStationary, TkSurvival) {
  EXPECT_EQ(qs::tk_survival(3, 0.0, -1.0), 1.0);
  EXPECT_NEAR(qs::tk_survival(2, 1.0, -1.0), std::exp(-1.0), 1e-15);
  double tail = 0.0;
  for (int j = 400; j >= 4; --j) tail += qs::population_ancestors_pmf(j, 0.3, -0.8);
  EXPECT_NEAR(qs::tk_survival(4, 0.3, -0.8), tail, 1e-12);
  EXPECT_THROW(qs::tk_survival(1, 0.3, -0.8), DomainError);
}

TEST(QuasiStationary, MeanWk) {
  EXPECT_DOUBLE_EQ(qs::mean_wk(2, -1.0), 0.5);
  EXPECT_NEAR(qs::mean_wk(3, -2.0), 1.0 / 12.0, 1e-16);
  for (int k = 2; k <= 6; ++k) {
    const double by_quadrature = integral(
        [&](double s) { return qs::tk_survival(k, s, -0.6) - qs::tk_survival(k + 1, s, -0.6); },
        0.0, kInf);
    EXPECT_NEAR(by_quadrature, qs::mean_wk(k, -0.6), 1e-8);
  }
  EXPECT_THROW(qs::mean_wk(1, -1.0), DomainError);
}

TEST(QuasiStationary, SampleLaw) {
  EXPECT_NEAR(qs::sample_ancestors_pmf(1, 1, 0.7, -1.0), 1.0, 1e-8);
  double mass = 0.0;
  for (int j = 1; j <= 5; ++j) mass += qs::sample_ancestors_pmf(j, 5, 0.7, -1.0);
  EXPECT_NEAR(mass, 1.0, 1e-8);
}

TEST(QuasiStationary, SampleLawMatchesSeries) {
  const double s = 0.4;
  const double alpha = -1.3;
  DiscretePmf population;
  population.support_start = 1;
  for (int k = 1; k < 2000; ++k) {
    population.probabilities.push_back(qs::population_ancestors_pmf(k, s, alpha));
  }
  const DiscretePmf series = mix_sample_over_population(6, population);
  for (int j = 1; j <= 6; ++j) {
    EXPECT_NEAR(qs::sample_ancestors_pmf(j, 6, s, alpha), series.at(j), 1e-8) << j;
  }
}

TEST(QuasiStationary, WkSurvival) {
  EXPECT_GE(qs::wk_survival(1e-6, 2, -1.0), 0.99);
  EXPECT_NEAR(qs::wk_survival(0.0, 3, -1.0), 1.0, 1e-12);
  EXPECT_EQ(qs::wk_survival(kInf, 3, -1.0), 0.0);
  EXPECT_LT(qs::wk_survival(60.0, 2, -1.0), 1e-20);
  double previous = 1.0;
  for (double w = 0.05; w < 5.0; w += 0.25) {
    const double value = qs::wk_survival(w, 3, -1.0);
    EXPECT_LE(value, previous);
    previous = value;
  }
}

TEST(QuasiStationary, WkSurvivalIntegratesToMean) {
  QuadratureSpec outer;
  outer.rel_tol = 1e-7;
  for (int k = 2; k <= 4; ++k) {
    const double mean =
        integral([&](double w) { return qs::wk_survival(w, k, -1.0); }, 0.0, kInf, outer);
    EXPECT_NEAR(mean / qs::mean_wk(k, -1.0), 1.0, 1e-4) << k;
  }
}

TEST(QuasiStationary, MutantFrequencyDensity) {
  EXPECT_EQ(qs::mutant_frequency_density(0.3, 2), 1.0);
  EXPECT_NEAR(integral([](double u) { return qs::mutant_frequency_density(u, 5); }, 0.0, 1.0),
              1.0, 1e-12);
  EXPECT_NEAR(
      integral([](double u) { return u * qs::mutant_frequency_density(u, 4); }, 0.0, 1.0),
      0.25, 1e-12);
  EXPECT_THROW(qs::mutant_frequency_density(0.0, 3), DomainError);
  EXPECT_THROW(qs::mutant_frequency_density(1.0, 3), DomainError);
  EXPECT_THROW(qs::mutant_frequency_density(0.5, 1), DomainError);
}

}  // namespace
}  // namespace feller
