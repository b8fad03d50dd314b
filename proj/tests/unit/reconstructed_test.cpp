#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "feller/error.hpp"
#include "feller/gof.hpp"
#include "feller/model.hpp"
#include "feller/quadrature.hpp"
#include "feller/random.hpp"
#include "feller/reconstructed.hpp"
#include "feller/rrp_tree.hpp"

namespace feller::rrp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kSeed = 20230601;

TEST(BdRates, Identities) {
  for (auto [s, alpha] : {std::pair{0.1, 1.0}, {0.5, -2.0}, {0.01, 30.0}}) {
    const BdRates r = bd_rates(s, alpha);
    EXPECT_NEAR(r.lambda_hat - r.mu_hat, alpha, 1e-12 * std::max(1.0, r.lambda_hat));
    EXPECT_NEAR(r.mu_hat / r.lambda_hat, std::exp(-alpha * s), 1e-14);
  }
}

TEST(BdRates, CriticalLimit) {
  const BdRates r = bd_rates(0.3, 1e-9);
  EXPECT_NEAR(r.lambda_hat * 0.3, 1.0, 1e-6);
  EXPECT_NEAR(r.mu_hat * 0.3, 1.0, 1e-6);
  EXPECT_DOUBLE_EQ(bd_rates(0.3, 0.0).lambda_hat, 1.0 / 0.3);
  EXPECT_THROW(bd_rates(0.0, 1.0), DomainError);
}

TEST(BdB, ExtinctionAndGeometricParameter) {
  // P(M(u) = 0) = mu_hat B(u) for the linear BD process; compare with the
  // textbook form mu (e^{du} - 1) / (lambda e^{du} - mu).
  const BdRates r = bd_rates(0.2, 0.7);
  const double u = 1.3;
  const double d = r.lambda_hat - r.mu_hat;
  const double growth = std::exp(d * u);
  EXPECT_NEAR(r.mu_hat * bd_b(u, r),
              r.mu_hat * (growth - 1.0) / (r.lambda_hat * growth - r.mu_hat), 1e-14);
  EXPECT_EQ(bd_b(0.0, r), 0.0);
}

TEST(LambdaCoal, Values) {
  EXPECT_DOUBLE_EQ(lambda_coal(1.0, 2.0, 0.0), 1.0);
  EXPECT_NEAR(lambda_coal(1.0, 2.0, 1e-8), 1.0, 1e-8);
  EXPECT_GT(lambda_coal(1.0 - 1e-6, 1.0, 1.0), 1e6);
  EXPECT_THROW(lambda_coal(2.0, 2.0, 0.5), DomainError);
}

TEST(LambdaCoal, IndependentOfBdScale) {
  const double t = 2.0;
  for (double alpha : {-1.5, 0.0, 0.8}) {
    for (double u : {0.0, 0.5, 1.7}) {
      for (double s : {1e-4, 0.01, 0.1, 0.29}) {
        if (s >= t - u) continue;
        const double via_bd = lambda_eff(u, t - s, bd_rates(s, alpha));
        EXPECT_NEAR(via_bd / lambda_coal(u, t, alpha), 1.0, 1e-12)
            << alpha << " " << u << " " << s;
      }
    }
  }
}

TEST(MuEff, Values) {
  EXPECT_NEAR(mu_eff(30.0, 1.0), 1.0, 1e-6);
  EXPECT_NEAR(mu_eff(0.4, 0.9), lambda_coal(3.0 - 0.4, 3.0, 0.9), 1e-14);
  EXPECT_THROW(mu_eff(1.0, 0.0), DomainError);
  EXPECT_THROW(mu_eff(1.0, -1.0), DomainError);
  double previous = kInf;
  for (double tau = 0.1; tau < 10.0; tau += 0.3) {
    EXPECT_LT(mu_eff(tau, 0.6), previous);
    previous = mu_eff(tau, 0.6);
  }
}

TEST(MuEff, IntegratesToRho) {
  const double s = 0.05;
  const double alpha = 1.2;
  for (double tau : {0.1, 1.0, 4.0}) {
    const double by_quadrature =
        integral([&](double xi) { return mu_eff(xi, alpha); }, s, tau);
    EXPECT_NEAR(by_quadrature, rho_of_tau(tau, s, alpha), 1e-10);
  }
}

TEST(RhoTau, RoundTripAndDerivative) {
  const double s = 0.01;
  const double alpha = 1.0;
  EXPECT_EQ(rho_of_tau(s, s, alpha), 0.0);
  for (double tau : {s, 2 * s, 10 * s, 50.0}) {
    EXPECT_NEAR(tau_of_rho(rho_of_tau(tau, s, alpha), s, alpha) / tau, 1.0, 1e-12);
  }
  for (double tau : {0.05, 0.5, 3.0}) {
    const double h = 1e-6 * tau;
    const double derivative =
        (rho_of_tau(tau + h, s, alpha) - rho_of_tau(tau - h, s, alpha)) / (2.0 * h);
    EXPECT_NEAR(derivative / mu_eff(tau, alpha), 1.0, 1e-6);
  }
  EXPECT_THROW(rho_of_tau(0.5 * s, s, alpha), DomainError);
  EXPECT_THROW(tau_of_rho(-1.0, s, alpha), DomainError);
}

TEST(Intensity, InverseAndDeficit) {
  const double x = 1.5;
  const double alpha = 0.9;
  for (double tau : {0.01, 0.7, 12.0}) {
    const double value = cumulative_intensity(tau, x, alpha);
    EXPECT_NEAR(value, x / beta(tau, alpha), 1e-12 * value);
    EXPECT_NEAR(inverse_cumulative_intensity(value, x, alpha) / tau, 1.0, 1e-12);
    EXPECT_NEAR(deficit_mass(tau, x, alpha), std::exp(-value), 1e-15);
  }
}

TEST(CoalescentRate, DerivativeOfIntensity) {
  const double tau = 0.7;
  const double x = 1.5;
  const double alpha = 0.9;
  const double h = 1e-5;
  const double derivative =
      -(cumulative_intensity(tau + h, x, alpha) - cumulative_intensity(tau - h, x, alpha)) /
      (2.0 * h);
  EXPECT_NEAR(derivative / coalescent_rate(tau, x, alpha), 1.0, 1e-6);
  const double tail = integral([&](double xi) { return coalescent_rate(xi, x, alpha); }, tau, kInf);
  EXPECT_NEAR(tail, cumulative_intensity(tau, x, alpha), 1e-8);
  EXPECT_LT(coalescent_rate(30.0, 1.0, 1.0), 1e-6);
}

TEST(AncestorsAtTau, PoissonForm) {
  // x / beta(tau) = 1 at alpha = 1, x = 1: 2 / (e^tau - 1) = 1.
  const double tau = std::log(3.0);
  EXPECT_NEAR(ancestors_at_tau_pmf(1, tau, 1.0, 1.0), std::exp(-1.0), 1e-15);
  EXPECT_THROW(ancestors_at_tau_pmf(0, tau, 1.0, 1.0), DomainError);
}

TEST(AncestorsAtTau, TableCarriesDeficit) {
  const DiscretePmf table = ancestors_at_tau_table(0.5, 2.0, 1.0);
  EXPECT_EQ(table.support_start, 1);
  EXPECT_NEAR(table.listed_mass(), 1.0 - deficit_mass(0.5, 2.0, 1.0), 1e-10);
  EXPECT_NEAR(table.total_mass, 1.0 - deficit_mass(0.5, 2.0, 1.0), 1e-15);
}

TEST(SampleAtTau, SingleLineage) {
  for (double tau : {0.1, 0.8, 3.0}) {
    const double expected = -std::expm1(-cumulative_intensity(tau, 1.3, 0.7));
    EXPECT_NEAR(sample_ancestors_at_tau_pmf(1, 1, tau, 1.3, 0.7, SampleForm::kSeries),
                expected, 1e-12);
    EXPECT_NEAR(sample_ancestors_at_tau_pmf(1, 1, tau, 1.3, 0.7, SampleForm::kIntegral),
                expected, 1e-10);
  }
}

TEST(SampleAtTau, FormsAgree) {
  EXPECT_NEAR(sample_ancestors_pmf_at_intensity(2, 5, 1.7, SampleForm::kSeries),
              sample_ancestors_pmf_at_intensity(2, 5, 1.7, SampleForm::kIntegral), 1e-8);
}

TEST(SampleAtTau, SumsToOneMinusDeficit) {
  const double tau = 0.6;
  double mass = 0.0;
  for (int j = 1; j <= 4; ++j) mass += sample_ancestors_at_tau_pmf(j, 4, tau, 1.0, 1.0);
  EXPECT_NEAR(mass, 1.0 - deficit_mass(tau, 1.0, 1.0), 1e-8);
  EXPECT_THROW(sample_ancestors_at_tau_pmf(5, 4, tau, 1.0, 1.0), DomainError);
}

TEST(MeanWaiting, RoutesAgree) {
  const double a = mean_inter_coalescent_sample(2, 3, 1.0, 1.0, MeanRoute::kDoubleIntegral);
  const double b = mean_inter_coalescent_sample(2, 3, 1.0, 1.0, MeanRoute::kTimeIntegral);
  EXPECT_NEAR(a / b, 1.0, 1e-5);
}

TEST(MeanWaiting, DecreasingInJ) {
  double previous = kInf;
  for (int j = 2; j <= 6; ++j) {
    const double value = mean_inter_coalescent_sample(j, 6, 1.0, 1.0);
    EXPECT_LT(value, previous) << j;
    previous = value;
  }
  EXPECT_THROW(mean_inter_coalescent_sample(1, 6, 1.0, 1.0), DomainError);
  EXPECT_THROW(mean_inter_coalescent_sample(7, 6, 1.0, 1.0), DomainError);
}

TEST(RrpTree, SingleLeaf) {
  SeededSource source(kSeed);
  const CoalescentTree tree = generate_rrp_tree(1, 0.01, 1.0, source);
  EXPECT_TRUE(tree.coalescence_times.empty());
  EXPECT_EQ(to_newick(tree), "1;");
}

TEST(RrpTree, TwoLeaves) {
  SeededSource source(kSeed);
  const CoalescentTree tree = generate_rrp_tree(2, 0.01, 1.0, source);
  ASSERT_EQ(tree.coalescence_times.size(), 1u);
  const std::string newick = to_newick(tree);
  EXPECT_EQ(newick.front(), '(');
  EXPECT_EQ(newick.back(), ';');
  EXPECT_NE(newick.find("1:"), std::string::npos);
  EXPECT_NE(newick.find("2:"), std::string::npos);
}

TEST(RrpTree, LargeTreeIsWellFormed) {
  SeededSource source(kSeed);
  const CoalescentTree tree = generate_rrp_tree(500, 0.001, 1.0, source);
  ASSERT_EQ(tree.coalescence_times.size(), 499u);
  EXPECT_TRUE(std::is_sorted(tree.coalescence_times.begin(), tree.coalescence_times.end()));
  EXPECT_GT(tree.coalescence_times.front(), 0.001);

  // Every node is merged exactly once, children strictly younger than parents.
  std::set<std::int64_t> seen;
  for (std::size_t i = 0; i < tree.merges.size(); ++i) {
    const auto [a, b] = tree.merges[i];
    EXPECT_TRUE(seen.insert(a).second);
    EXPECT_TRUE(seen.insert(b).second);
    const double parent_time = tree.coalescence_times[i];
    EXPECT_LT(tree.node_time(a), parent_time);
    EXPECT_LT(tree.node_time(b), parent_time);
  }
  EXPECT_EQ(static_cast<std::int64_t>(seen.size()), tree.node_count() - 1);

  const std::string newick = to_newick(tree);
  EXPECT_EQ(std::count(newick.begin(), newick.end(), '('), 499);
  EXPECT_EQ(std::count(newick.begin(), newick.end(), ')'), 499);
  EXPECT_EQ(newick.back(), ';');
}

TEST(RrpTree, DeterministicForSeed) {
  SeededSource a(kSeed, 7);
  SeededSource b(kSeed, 7);
  EXPECT_EQ(to_newick(generate_rrp_tree(50, 0.01, 0.5, a)),
            to_newick(generate_rrp_tree(50, 0.01, 0.5, b)));
}

TEST(RrpTree, TimesCsv) {
  SeededSource source(kSeed);
  const std::string csv = to_times_csv(generate_rrp_tree(4, 0.01, 1.0, source));
  EXPECT_EQ(csv.rfind("event_index,j_before,tau\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(RrpTree, FirstHoldingTimeIsExponential) {
  const std::int64_t j = 6;
  const double s = 0.02;
  const double alpha = 1.0;
  SeededSource source(kSeed, 11);
  std::vector<double> holding;
  for (int i = 0; i < 10000; ++i) {
    const auto times = sample_rrp_times(j, s, alpha, source);
    holding.push_back(rho_of_tau(times.front(), s, alpha));
  }
  const GofReport report =
      ks_test(holding, [&](double r) { return -std::expm1(-static_cast<double>(j) * r); });
  EXPECT_GT(report.p_value, 1e-3) << report.statistic;
}

TEST(RrpTree, ConditionalNextTimeLaw) {
  // Given the 3 -> 2 merge at tau_3, P(tau_2 > tau) = [(e^{a tau_3} - 1) /
  // (e^{a tau} - 1)]^2, so that ratio squared is uniform. Binned check.
  const double s = 0.05;
  const double alpha = 0.8;
  const int runs = 20000;
  const int bins = 10;
  std::vector<int> counts(bins, 0);
  SeededSource source(kSeed, 12);
  for (int i = 0; i < runs; ++i) {
    const auto times = sample_rrp_times(3, s, alpha, source);
    const double ratio = std::expm1(alpha * times[0]) / std::expm1(alpha * times[1]);
    const double u = ratio * ratio;
    ++counts[std::min(bins - 1, static_cast<int>(u * bins))];
  }
  const double p = 1.0 / bins;
  const double se = std::sqrt(p * (1.0 - p) / runs);
  for (int b = 0; b < bins; ++b) {
    EXPECT_LE(std::abs(counts[b] / static_cast<double>(runs) - p), 3.0 * se + 1e-12) << b;
  }
}

TEST(RrpTree, RootTimeIsOrderStatistic) {
  // The merge times are the n - 1 smallest of n iid draws with survival
  // (e^{a s} - 1) / (e^{a tau} - 1); the largest draw is the founder's
  // origin. So the root is the (n-1)-th of n: CDF F^n + n F^{n-1} (1 - F).
  const std::int64_t n = 5;
  const double s = 0.01;
  const double alpha = 1.3;
  SeededSource source(kSeed, 13);
  std::vector<double> roots;
  for (int i = 0; i < 5000; ++i) roots.push_back(sample_rrp_times(n, s, alpha, source).back());
  const auto dn = static_cast<double>(n);
  const GofReport report = ks_test(roots, [&](double tau) {
    if (tau <= s) return 0.0;
    const double f = 1.0 - std::expm1(alpha * s) / std::expm1(alpha * tau);
    return std::pow(f, dn) + dn * std::pow(f, dn - 1.0) * (1.0 - f);
  });
  EXPECT_GT(report.p_value, 1e-3) << report.statistic;
}

TEST(RrpTree, RejectsBadArguments) {
  SeededSource source(kSeed);
  EXPECT_THROW(generate_rrp_tree(0, 0.01, 1.0, source), DomainError);
  EXPECT_THROW(generate_rrp_tree(3, 0.0, 1.0, source), DomainError);
  EXPECT_THROW(generate_rrp_tree(3, 0.01, -1.0, source), DomainError);
}

}  // namespace
}  // namespace feller::rrp
