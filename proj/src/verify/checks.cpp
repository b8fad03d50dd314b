#include "feller/verify/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "feller/ancestry.hpp"
#include "feller/commands.hpp"
#include "feller/error.hpp"
#include "feller/gof.hpp"
#include "feller/model.hpp"
#include "feller/numerics.hpp"
#include "feller/quadrature.hpp"
#include "feller/quasi_stationary.hpp"
#include "feller/random.hpp"
#include "feller/reconstructed.hpp"
#include "feller/simulate.hpp"
#include "feller/verify/oracles.hpp"

namespace feller::verify {

namespace {

constexpr double kPValueFloor = 1e-3;
constexpr std::int64_t kDraws = 100000;
constexpr double kInf = std::numeric_limits<double>::infinity();

CheckResult make_result(const Check& check, double statistic, double tolerance,
                        Comparison comparison, nlohmann::json details) {
  CheckResult r;
  r.id = check.id;
  r.criterion = check.criterion;
  r.description = check.description;
  r.statistic = statistic;
  r.tolerance = tolerance;
  r.comparison = comparison;
  r.passed = comparison == Comparison::kAtMost ? statistic <= tolerance
                                                : statistic > tolerance;
  r.details = std::move(details);
  return r;
}

// Per-check random stream: criterion and sub-check index keep streams
// disjoint across checks.
SeededSource stream(std::uint64_t seed, int criterion, int sub = 0) {
  return SeededSource(seed, static_cast<std::uint64_t>(criterion) * 1000 +
                                static_cast<std::uint64_t>(sub));
}

struct SampleMoments {
  double n = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double mean_se = 0.0;
  double variance_se = 0.0;
};

SampleMoments moments(const std::vector<double>& values) {
  SampleMoments m;
  m.n = static_cast<double>(values.size());
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) / m.n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double d = v - m.mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m.variance = m2 / (m.n - 1.0);
  m4 /= m.n;
  m.mean_se = std::sqrt(m.variance / m.n);
  // Large-sample standard error of the sample variance.
  m.variance_se = std::sqrt(std::max(0.0, m4 - m.variance * m.variance) / m.n);
  return m;
}

double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

// ---- population ancestors -------------------------------------------------

CheckResult polya_aeppli_sampler(const Check& check, std::uint64_t seed) {
  const TimeWindow window(1.0, 0.5);
  double min_p = 1.0;
  nlohmann::json details = nlohmann::json::array();
  int sub = 0;
  for (double alpha : {-1.0, 0.0, 0.8}) {
    const ModelParams params(alpha, 1.2);
    SeededSource source = stream(seed, check.criterion, sub++);
    std::vector<std::int64_t> draws(kDraws);
    for (auto& d : draws) d = sim::sample_population_ancestors(window, params, source);
    const GofReport report =
        chi_square_test(population_ancestors_table(window, params, false), draws);
    min_p = std::min(min_p, report.p_value);
    details.push_back({{"alpha", alpha}, {"gof", report.to_json()}});
  }
  return make_result(check, min_p, kPValueFloor, Comparison::kAbove,
                     {{"t", 1.0}, {"s", 0.5}, {"x0", 1.2}, {"draws", kDraws},
                      {"per_alpha", details}});
}

CheckResult polya_aeppli_pgf(const Check& check, std::uint64_t) {
  constexpr int kMax = 50;
  double worst = 0.0;
  nlohmann::json details = nlohmann::json::array();
  const std::pair<double, double> cases[] = {{0.5, 0.1}, {2.0, 0.5}, {5.0, 0.9}};
  for (const auto& [nu, p] : cases) {
    const std::vector<double> reference = oracle::polya_aeppli_by_pgf(nu, p, kMax);
    double err = 0.0;
    for (int k = 0; k <= kMax; ++k) {
      err = std::max(err, std::abs(polya_aeppli_pmf(k, nu, p) -
                                   reference[static_cast<std::size_t>(k)]));
    }
    worst = std::max(worst, err);
    details.push_back({{"nu", nu}, {"p", p}, {"max_abs_error", err}});
  }
  return make_result(check, worst, 1e-10, Comparison::kAtMost,
                     {{"k_max", kMax}, {"cases", details}});
}

CheckResult subsample_enumeration(const Check& check, std::uint64_t) {
  std::int64_t mismatches = 0;
  std::int64_t compared = 0;
  nlohmann::json first_mismatch;
  for (int n = 1; n <= 12; ++n) {
    for (int k = 1; k <= 12; ++k) {
      const std::vector<std::uint64_t> counts = oracle::composition_counts(n, k);
      const std::uint64_t total =
          std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
      for (int j = 1; j <= n; ++j) {
        const std::uint64_t c = counts[static_cast<std::size_t>(j)];
        const std::uint64_t g = std::gcd(c, total);
        const Fraction expected =
            c == 0 ? Fraction{0, 1} : Fraction{c / g, total / g};
        const Fraction got = sample_given_population_fraction(j, n, k);
        ++compared;
        if (!(got == expected)) {
          if (mismatches == 0) {
            first_mismatch = {{"j", j}, {"n", n}, {"k", k},
                              {"expected", std::to_string(expected.numerator) + "/" +
                                               std::to_string(expected.denominator)},
                              {"got", std::to_string(got.numerator) + "/" +
                                          std::to_string(got.denominator)}};
          }
          ++mismatches;
        }
      }
    }
  }
  nlohmann::json details{{"compared", compared}};
  if (mismatches > 0) details["first_mismatch"] = first_mismatch;
  return make_result(check, static_cast<double>(mismatches), 0.0,
                     Comparison::kAtMost, details);
}

CheckResult sample_ancestors_sampler(const Check& check, std::uint64_t seed) {
  const TimeWindow window(1.0, 0.5);
  const ModelParams params(0.8, 1.2);
  double min_p = 1.0;
  nlohmann::json details = nlohmann::json::array();
  int sub = 0;
  for (std::int64_t n : {2, 3, 6}) {
    SeededSource source = stream(seed, check.criterion, sub++);
    std::vector<std::int64_t> draws(kDraws);
    for (auto& d : draws) {
      std::int64_t population = 0;
      while (population == 0) {
        population = sim::sample_population_ancestors(window, params, source);
      }
      d = sim::sample_subsample_ancestors(n, population, source);
    }
    const GofReport report =
        chi_square_test(sample_ancestors_table(n, window, params), draws);
    min_p = std::min(min_p, report.p_value);
    details.push_back({{"n", n}, {"gof", report.to_json()}});
  }
  return make_result(check, min_p, kPValueFloor, Comparison::kAbove,
                     {{"t", 1.0}, {"s", 0.5}, {"alpha", 0.8}, {"x0", 1.2},
                      {"draws", kDraws}, {"per_n", details}});
}

CheckResult sample_ancestors_normalisation(const Check& check, std::uint64_t) {
  double worst = 0.0;
  nlohmann::json details = nlohmann::json::array();
  const TimeWindow window(1.0, 0.5);
  for (double alpha : {-1.0, 0.0, 0.8}) {
    const ModelParams params(alpha, 1.2);
    for (std::int64_t n : {2, 3, 6}) {
      const DiscretePmf table = sample_ancestors_table(n, window, params);
      const double err = std::abs(table.listed_mass() - 1.0);
      worst = std::max(worst, err);
      details.push_back({{"alpha", alpha}, {"n", n}, {"abs_error", err}});
    }
  }
  return make_result(check, worst, 1e-10, Comparison::kAtMost, {{"cases", details}});
}

// ---- quasi-stationary limit ---------------------------------------------

constexpr double kQsAlpha = -0.7;

CheckResult qs_ancestor_limit(const Check& check, std::uint64_t) {
  const double s = 0.5;
  const TimeWindow window(1000.0, s);
  const ModelParams params(kQsAlpha, 1.0);
  double worst = 0.0;
  for (std::int64_t k = 1; k <= 80; ++k) {
    const double finite = population_ancestors_pmf(k, window, params, true);
    worst = std::max(worst, std::abs(finite - qs::population_ancestors_pmf(k, s, kQsAlpha)));
  }
  return make_result(check, worst, 1e-6, Comparison::kAtMost,
                     {{"t", 1000.0}, {"s", s}, {"alpha", kQsAlpha}, {"k_max", 80}});
}

QuadratureSpec semi_infinite_quadrature() {
  QuadratureSpec spec;
  spec.abs_tol = 1e-12;
  spec.rel_tol = 1e-8;
  return spec;
}

CheckResult qs_wk_mean(const Check& check, std::uint64_t) {
  double worst = 0.0;
  nlohmann::json details = nlohmann::json::array();
  for (std::int64_t k : {2, 3, 4}) {
    const double area = integral(
        [k](double w) { return qs::wk_survival(w, k, kQsAlpha); }, 0.0, kInf,
        semi_infinite_quadrature());
    const double expected = qs::mean_wk(k, kQsAlpha);
    const double err = relative_error(area, expected);
    worst = std::max(worst, err);
    details.push_back({{"k", k}, {"integral", area}, {"expected", expected},
                       {"relative_error", err}});
  }
  return make_result(check, worst, 1e-4, Comparison::kAtMost,
                     {{"alpha", kQsAlpha}, {"cases", details}});
}

CheckResult qs_sample_mean(const Check& check, std::uint64_t) {
  double worst = 0.0;
  nlohmann::json details = nlohmann::json::array();
  const std::pair<std::int64_t, std::int64_t> cases[] = {{2, 2}, {2, 5}, {4, 7}};
  for (const auto& [j, n] : cases) {
    const double area = integral(
        [j = j, n = n](double s) {
          if (s <= 0.0) return j == n ? 1.0 : 0.0;
          return qs::sample_ancestors_pmf(j, n, s, kQsAlpha);
        },
        0.0, kInf, semi_infinite_quadrature());
    const double expected = qs::mean_wk(j, kQsAlpha);
    const double err = relative_error(area, expected);
    worst = std::max(worst, err);
    details.push_back({{"j", j}, {"n", n}, {"integral", area},
                       {"expected", expected}, {"relative_error", err}});
  }
  return make_result(check, worst, 1e-4, Comparison::kAtMost,
                     {{"alpha", kQsAlpha}, {"cases", details}});
}

// ---- rate identities ------------------------------------------------------

CheckResult lambda_coal_s_independence(const Check& check, std::uint64_t) {
  const double t = 1.0;
  double worst = 0.0;
  std::int64_t evaluated = 0;
  for (double alpha : {-1.5, 0.5, 2.0}) {
    for (double u : {0.0, 0.3, 0.9}) {
      const double coal = rrp::lambda_coal(u, t, alpha);
      for (double fraction : {0.001, 0.1, 0.5, 0.9, 0.999}) {
        const double s = fraction * (t - u);
        const double eff = rrp::lambda_eff(u, t - s, rrp::bd_rates(s, alpha));
        worst = std::max(worst, relative_error(eff, coal));
        ++evaluated;
      }
    }
  }
  return make_result(check, worst, 1e-12, Comparison::kAtMost,
                     {{"t", t}, {"evaluated", evaluated}});
}

CheckResult rho_tau_round_trip(const Check& check, std::uint64_t) {
  const double s = 0.01;
  const double alpha = 1.0;
  double worst = 0.0;
  for (double tau : {s, 2.0 * s, 10.0 * s, 1.0, 25.0}) {
    const double back = rrp::tau_of_rho(rrp::rho_of_tau(tau, s, alpha), s, alpha);
    worst = std::max(worst, relative_error(back, tau));
  }
  return make_result(check, worst, 1e-12, Comparison::kAtMost,
                     {{"s", s}, {"alpha", alpha}});
}

CheckResult rho_derivative(const Check& check, std::uint64_t) {
  const double s = 0.01;
  const double alpha = 1.0;
  const double h = 1e-5;
  double worst = 0.0;
  for (double tau : {0.05, 0.5, 2.0, 8.0}) {
    const double fd = (rrp::rho_of_tau(tau + h, s, alpha) -
                       rrp::rho_of_tau(tau - h, s, alpha)) /
                      (2.0 * h);
    worst = std::max(worst, relative_error(fd, rrp::mu_eff(tau, alpha)));
  }
  return make_result(check, worst, 1e-6, Comparison::kAtMost,
                     {{"s", s}, {"alpha", alpha}, {"step", h}});
}

// ---- coalescent-time law --------------------------------------------------

CheckResult nhpp_count_law(const Check& check, std::uint64_t seed) {
  const double x = 1.0;
  const double alpha = 1.0;
  double min_p = 1.0;
  nlohmann::json details = nlohmann::json::array();
  int sub = 0;
  for (double tau : {0.3, 1.0}) {
    SeededSource source = stream(seed, check.criterion, sub++);
    std::vector<std::int64_t> counts(kDraws);
    for (auto& c : counts) {
      c = static_cast<std::int64_t>(
          sim::sample_coalescent_times_nhpp(x, alpha, tau, source).size());
    }
    const GofReport report =
        chi_square_test(rrp::ancestors_at_tau_table(tau, x, alpha), counts);
    min_p = std::min(min_p, report.p_value);
    details.push_back({{"tau", tau}, {"gof", report.to_json()}});
  }
  return make_result(
      check, min_p, kPValueFloor, Comparison::kAbove,
      {{"x", x}, {"alpha", alpha}, {"runs", kDraws},
       {"convention",
        "N(tau) counts points above tau including the founder origin; "
        "N = 0 carries the deficit mass exp(-x/beta(tau))"},
       {"per_tau", details}});
}

CheckResult cumulative_intensity_quadrature(const Check& check, std::uint64_t) {
  const double x = 1.0;
  const double alpha = 1.0;
  QuadratureSpec spec;
  spec.abs_tol = 1e-15;
  spec.rel_tol = 1e-12;
  double worst = 0.0;
  for (double tau : {0.3, 1.0, 3.0}) {
    const double area = integral(
        [&](double xi) { return rrp::coalescent_rate(xi, x, alpha); }, tau, kInf, spec);
    worst = std::max(worst, relative_error(area, rrp::cumulative_intensity(tau, x, alpha)));
  }
  return make_result(check, worst, 1e-8, Comparison::kAtMost,
                     {{"x", x}, {"alpha", alpha}});
}

// ---- sample formulas -------------------------------------------------------

CheckResult sample_law_forms(const Check& check, std::uint64_t) {
  double worst = 0.0;
  for (std::int64_t j : {1, 2, 3}) {
    for (std::int64_t n : {3, 6, 12}) {
      for (double intensity : {0.3, 1.7, 8.0}) {
        const double series = rrp::sample_ancestors_pmf_at_intensity(
            j, n, intensity, rrp::SampleForm::kSeries);
        const double integral_form = rrp::sample_ancestors_pmf_at_intensity(
            j, n, intensity, rrp::SampleForm::kIntegral);
        worst = std::max(worst, std::abs(series - integral_form));
      }
    }
  }
  return make_result(check, worst, 1e-8, Comparison::kAtMost,
                     {{"j", {1, 2, 3}}, {"n", {3, 6, 12}}, {"intensity", {0.3, 1.7, 8.0}}});
}

CheckResult mean_waiting_routes(const Check& check, std::uint64_t) {
  const double x = 1.0;
  const double alpha = 1.0;
  double worst = 0.0;
  nlohmann::json details = nlohmann::json::array();
  const std::pair<std::int64_t, std::int64_t> cases[] = {{2, 3}, {2, 4}, {3, 6}, {6, 6}};
  for (const auto& [j, n] : cases) {
    const double a = rrp::mean_inter_coalescent_sample(j, n, x, alpha,
                                                       rrp::MeanRoute::kDoubleIntegral);
    const double b = rrp::mean_inter_coalescent_sample(j, n, x, alpha,
                                                       rrp::MeanRoute::kTimeIntegral);
    const double err = relative_error(a, b);
    worst = std::max(worst, err);
    details.push_back({{"j", j}, {"n", n}, {"double_integral", a},
                       {"time_integral", b}, {"relative_error", err}});
  }
  return make_result(check, worst, 1e-5, Comparison::kAtMost,
                     {{"x", x}, {"alpha", alpha}, {"cases", details}});
}

CheckResult mean_waiting_monte_carlo(const Check& check, std::uint64_t seed) {
  constexpr std::int64_t kN = 4;
  constexpr std::int64_t kLineageCap = 500;
  const double x = 1.0;
  const double alpha = 1.0;
  SeededSource source = stream(seed, check.criterion);
  std::vector<std::vector<double>> waits(kN - 1);
  for (std::int64_t r = 0; r < kDraws; ++r) {
    const std::vector<double> w =
        sim::sample_sample_waiting_times(kN, x, alpha, kLineageCap, source);
    for (std::size_t i = 0; i < w.size(); ++i) waits[i].push_back(w[i]);
  }
  double z_j2 = 0.0;
  nlohmann::json details = nlohmann::json::array();
  for (std::int64_t j = 2; j <= kN; ++j) {
    const SampleMoments m = moments(waits[static_cast<std::size_t>(j - 2)]);
    const double exact = rrp::mean_inter_coalescent_sample(j, kN, x, alpha);
    const double z = std::abs(m.mean - exact) / m.mean_se;
    if (j == 2) z_j2 = z;
    details.push_back({{"j", j}, {"monte_carlo_mean", m.mean}, {"standard_error", m.mean_se},
                       {"analytic", exact}, {"z", z}});
  }
  return make_result(check, z_j2, 3.0, Comparison::kAtMost,
                     {{"n", kN}, {"x", x}, {"alpha", alpha}, {"runs", kDraws},
                      {"lineage_cap", kLineageCap}, {"per_j", details}});
}

// ---- limit consistency ----------------------------------------------------

CheckResult bd_feller_limit(const Check& check, std::uint64_t seed) {
  constexpr std::int64_t kBdRuns = 2000;
  const double s = 1e-3;
  const double t = 0.4;
  const double alpha = 0.5;
  const double x0 = 0.05;
  const auto m0 = static_cast<std::int64_t>(std::llround(diffusion_to_physical(x0, s)));
  const rrp::BdRates rates = rrp::bd_rates(s, alpha);

  SeededSource bd_source = stream(seed, check.criterion, 0);
  std::vector<double> bd(kBdRuns);
  for (auto& v : bd) {
    const auto path = sim::simulate_bd(m0, rates, t - s, bd_source);
    v = physical_to_diffusion(static_cast<double>(path.back().count), s);
  }
  SeededSource feller_source = stream(seed, check.criterion, 1);
  std::vector<double> feller(kDraws);
  const ModelParams params(alpha, x0);
  for (auto& v : feller) v = sim::sample_feller_transition(t, params, feller_source);

  const SampleMoments a = moments(bd);
  const SampleMoments b = moments(feller);
  const double z_mean =
      std::abs(a.mean - b.mean) / std::hypot(a.mean_se, b.mean_se);
  const double z_var =
      std::abs(a.variance - b.variance) / std::hypot(a.variance_se, b.variance_se);
  const oracle::FellerMoments exact = oracle::feller_moments(t, alpha, x0);
  return make_result(
      check, std::max(z_mean, z_var), 3.0, Comparison::kAtMost,
      {{"s", s}, {"t", t}, {"alpha", alpha}, {"x0", x0}, {"m0", m0},
       {"bd_runs", kBdRuns}, {"feller_draws", kDraws},
       {"bd_mean", a.mean}, {"bd_variance", a.variance},
       {"feller_mean", b.mean}, {"feller_variance", b.variance},
       {"exact_mean", exact.mean}, {"exact_variance", exact.variance},
       {"z_mean", z_mean}, {"z_variance", z_var}});
}

CheckResult bgw_feller_limit(const Check& check, std::uint64_t seed) {
  constexpr std::int64_t kRuns = 10000;
  constexpr std::int64_t kY0 = 2000;
  const double alpha = 0.5;
  const double x0 = 0.5;
  const double t = 1.0;
  // Poisson offspring has sigma^2 = lambda, so alpha = y0 log(lambda) /
  // lambda fixes lambda implicitly.
  double lambda = 1.0;
  for (int i = 0; i < 50; ++i) lambda = std::exp(alpha * lambda / kY0);
  const BgwScale scale(kY0, lambda, lambda, static_cast<std::int64_t>(x0 * kY0));
  const auto generations = static_cast<std::int64_t>(std::llround(time_to_generations(t, scale)));
  const double t_eff = generations_to_time(static_cast<double>(generations), scale);
  const ModelParams params = bgw_to_diffusion(scale);

  SeededSource source = stream(seed, check.criterion);
  std::vector<double> scaled(kRuns);
  std::vector<double> extinct(kRuns);
  for (std::int64_t r = 0; r < kRuns; ++r) {
    const auto path = sim::simulate_bgw(scale, sim::Offspring::kPoisson, generations, source);
    scaled[static_cast<std::size_t>(r)] = static_cast<double>(path.back()) / kY0;
    extinct[static_cast<std::size_t>(r)] = path.back() == 0 ? 1.0 : 0.0;
  }
  const SampleMoments mean_m = moments(scaled);
  const SampleMoments ext_m = moments(extinct);
  const double mean_exact = params.x0 * std::exp(params.alpha * t_eff);
  const double ext_exact = std::exp(-params.x0 * mu(t_eff, params.alpha));
  // Discreteness of the BGW process biases both statistics by O(1/y0).
  const double allowance = 5.0 / kY0;
  const double mean_ratio =
      std::abs(mean_m.mean - mean_exact) / (3.0 * mean_m.mean_se + allowance);
  const double ext_ratio =
      std::abs(ext_m.mean - ext_exact) / (3.0 * ext_m.mean_se + allowance);
  return make_result(
      check, std::max(mean_ratio, ext_ratio), 1.0, Comparison::kAtMost,
      {{"y0", kY0}, {"m0", scale.m0}, {"lambda", lambda}, {"generations", generations},
       {"t", t_eff}, {"alpha", params.alpha}, {"runs", kRuns},
       {"mean", mean_m.mean}, {"mean_exact", mean_exact}, {"mean_se", mean_m.mean_se},
       {"extinct_fraction", ext_m.mean}, {"extinct_exact", ext_exact},
       {"extinct_se", ext_m.mean_se}, {"bias_allowance", allowance},
       {"statistic_definition", "max |diff| / (3 SE + 5 / y0)"}});
}

CheckResult yaglom_limit(const Check& check, std::uint64_t seed) {
  const double t = 200.0;
  const ModelParams params(0.0, 1.0);
  SeededSource source = stream(seed, check.criterion);
  std::vector<double> draws;
  draws.reserve(kDraws);
  std::int64_t attempts = 0;
  while (static_cast<std::int64_t>(draws.size()) < kDraws) {
    ++attempts;
    const double value = sim::sample_feller_transition(t, params, source);
    if (value > 0.0) draws.push_back(value / t);
  }
  const GofReport report =
      ks_test(std::move(draws), [](double w) { return -std::expm1(-2.0 * w); });
  return make_result(check, report.statistic, 0.02, Comparison::kAtMost,
                     {{"t", t}, {"x0", 1.0}, {"conditioned_draws", kDraws},
                      {"attempts", attempts}, {"ks_p_value", report.p_value}});
}

// ---- conditional BD law ---------------------------------------------------

CheckResult conditional_bd_law(const Check& check, std::uint64_t seed) {
  const double s = 0.5;
  const double alpha = 0.5;
  const double u = 1.0;
  const rrp::BdRates rates = rrp::bd_rates(s, alpha);
  const double q = rates.lambda_hat * rrp::bd_b(u, rates);

  SeededSource source = stream(seed, check.criterion);
  std::vector<std::int64_t> survivors;
  for (std::int64_t r = 0; r < kDraws; ++r) {
    const auto path = sim::simulate_bd(1, rates, u, source);
    if (path.back().count > 0) survivors.push_back(path.back().count);
  }
  DiscretePmf geometric;
  geometric.support_start = 1;
  for (double mass = 1.0 - q; mass > 1e-14; mass *= q) geometric.probabilities.push_back(mass);
  const GofReport report = chi_square_test(geometric, survivors);
  return make_result(check, report.p_value, kPValueFloor, Comparison::kAbove,
                     {{"s", s}, {"alpha", alpha}, {"u", u}, {"m0", 1}, {"runs", kDraws},
                      {"geometric_parameter", q}, {"gof", report.to_json()}});
}

// ---- determinism -----------------------------------------------------------

std::vector<app::RunConfig> determinism_configs(std::uint64_t seed) {
  std::vector<app::RunConfig> configs;
  auto base = [seed](const char* command) {
    app::RunConfig c;
    c.command = command;
    c.seed = seed;
    return c;
  };
  {
    auto c = base("pmf");
    c.t = 1.0; c.s = 0.5; c.alpha = 0.8; c.x0 = 1.2;
    configs.push_back(c);
    c.n = 5;
    c.format = "json";
    configs.push_back(c);
  }
  {
    auto c = base("qs");
    c.s = 0.5; c.alpha = -1.0; c.n = 4;
    configs.push_back(c);
  }
  for (const char* format : {"newick", "csv", "json"}) {
    auto c = base("rrp-tree");
    c.n = 50; c.s = 0.01; c.alpha = 1.0; c.format = format;
    configs.push_back(c);
  }
  {
    auto c = base("simulate");
    c.replicates = 200;
    c.what = "feller"; c.t = 1.0; c.alpha = 0.5; c.x0 = 1.0;
    configs.push_back(c);
    c.what = "ancestors"; c.s = 0.5;
    configs.push_back(c);
    c.what = "bd"; c.m0 = 3;
    configs.push_back(c);
    auto d = base("simulate");
    d.replicates = 200;
    d.what = "nhpp"; d.x = 1.0; d.alpha = 1.0; d.tau = 0.5;
    configs.push_back(d);
    d.what = "sample-waits"; d.n = 4;
    configs.push_back(d);
  }
  {
    auto c = base("verify");
    c.only = {"polya-aeppli-pgf", "rate-round-trip"};
    configs.push_back(c);
  }
  return configs;
}

CheckResult command_determinism(const Check& check, std::uint64_t seed) {
  std::int64_t mismatches = 0;
  nlohmann::json compared = nlohmann::json::array();
  for (const app::RunConfig& config : determinism_configs(seed)) {
    const app::CommandResult first = app::run_command(config);
    const app::CommandResult second = app::run_command(config);
    const bool same = first.output == second.output &&
                      first.times_csv == second.times_csv &&
                      first.status == second.status;
    if (!same) ++mismatches;
    compared.push_back({{"command", config.command},
                        {"what", config.what},
                        {"bytes", first.output.size()},
                        {"identical", same}});
  }
  return make_result(check, static_cast<double>(mismatches), 0.0,
                     Comparison::kAtMost, {{"runs", compared}});
}

template <CheckResult (*F)(const Check&, std::uint64_t)>
Check entry(std::string id, int criterion, std::string description) {
  Check c{std::move(id), criterion, std::move(description), nullptr};
  // The check needs its own metadata, so bind a copy into the runner.
  Check meta = c;
  c.run = [meta](std::uint64_t seed) { return F(meta, seed); };
  return c;
}

}  // namespace

const std::vector<Check>& all_checks() {
  static const std::vector<Check> checks = {
      entry<polya_aeppli_sampler>(
          "polya-aeppli-sampler", 1,
          "two-step ancestor sampler vs Polya-Aeppli law, alpha in {-1, 0, 0.8}; "
          "min chi-square p-value"),
      entry<polya_aeppli_pgf>(
          "polya-aeppli-pgf", 2,
          "Polya-Aeppli closed form vs pgf inversion, k <= 50; max abs error"),
      entry<subsample_enumeration>(
          "subsample-enumeration", 3,
          "subsample ancestor law vs exhaustive composition enumeration, n, k <= 12; "
          "count of inexact rationals"),
      entry<sample_ancestors_sampler>(
          "sample-ancestors-sampler", 4,
          "sample ancestor law vs composed Monte Carlo, n in {2, 3, 6}; min "
          "chi-square p-value"),
      entry<sample_ancestors_normalisation>(
          "sample-ancestors-normalisation", 4,
          "sample ancestor law sums to one; max abs error"),
      entry<qs_ancestor_limit>(
          "qs-ancestor-limit", 5,
          "conditioned ancestor law at t = 1000 vs quasi-stationary geometric; max abs "
          "error"),
      entry<qs_wk_mean>("qs-wk-mean", 5,
                        "integral of W_k survival vs 1/(|alpha| k (k-1)); max relative "
                        "error"),
      entry<qs_sample_mean>(
          "qs-sample-mean", 5,
          "integral over s of the quasi-stationary sample ancestor law vs 1/(|alpha| j "
          "(j-1)); max relative error"),
      entry<lambda_coal_s_independence>(
          "rate-s-independence", 6,
          "reconstructed birth rate at any s equals the coalescent birth rate; max "
          "relative error"),
      entry<rho_tau_round_trip>("rate-round-trip", 6,
                                "tau -> rho -> tau round trip; max relative error"),
      entry<rho_derivative>("rate-rho-derivative", 6,
                            "finite-difference d rho / d tau vs death rate; max relative "
                            "error"),
      entry<nhpp_count_law>(
          "nhpp-count-law", 7,
          "NHPP points above tau vs Poisson law with deficit bin, tau in {0.3, 1}; min "
          "chi-square p-value"),
      entry<cumulative_intensity_quadrature>(
          "nhpp-cumulative-intensity", 7,
          "quadrature of the coalescent rate vs x / beta(tau); max relative error"),
      entry<sample_law_forms>(
          "sample-law-forms", 8,
          "Kummer series vs integral form of the sample ancestor law on a 3x3x3 grid; "
          "max abs difference"),
      entry<mean_waiting_routes>(
          "mean-waiting-routes", 8,
          "mean inter-coalescence time: double integral vs time integral of the law; "
          "max relative error"),
      entry<mean_waiting_monte_carlo>(
          "mean-waiting-monte-carlo", 8,
          "mean W_2 for n = 4 vs Monte Carlo; |z|"),
      entry<bd_feller_limit>(
          "bd-limit", 9,
          "scaled linear BD population at s = 1e-3 vs exact Feller sampler; max |z| of "
          "mean and variance"),
      entry<bgw_feller_limit>(
          "bgw-limit", 9,
          "scaled BGW population at y0 = 2000 vs Feller mean and extinction atom; "
          "|diff| / (3 SE + 5/y0)"),
      entry<yaglom_limit>("yaglom-limit", 9,
                          "critical X(t)/t given survival at t = 200 vs Exp(2); KS "
                          "distance"),
      entry<conditional_bd_law>(
          "conditional-bd-law", 10,
          "linear BD population given survival vs shifted geometric; chi-square "
          "p-value"),
      entry<command_determinism>(
          "command-determinism", 11,
          "every command twice with the same seed; count of differing outputs"),
  };
  return checks;
}

std::vector<const Check*> select_checks(const std::vector<std::string>& only) {
  const auto& checks = all_checks();
  std::vector<const Check*> selected;
  if (only.empty()) {
    for (const Check& c : checks) selected.push_back(&c);
    return selected;
  }
  std::vector<bool> keep(checks.size(), false);
  for (const std::string& selector : only) {
    bool matched = false;
    for (std::size_t i = 0; i < checks.size(); ++i) {
      if (checks[i].id == selector ||
          std::to_string(checks[i].criterion) == selector) {
        keep[i] = true;
        matched = true;
      }
    }
    if (!matched) throw DomainError("unknown check selector: " + selector);
  }
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (keep[i]) selected.push_back(&checks[i]);
  }
  return selected;
}

bool Report::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& r) { return r.passed; });
}

nlohmann::json Report::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const CheckResult& r : checks) {
    list.push_back({{"id", r.id},
                    {"criterion", r.criterion},
                    {"description", r.description},
                    {"statistic", std::isfinite(r.statistic) ? nlohmann::json(r.statistic)
                                                             : nlohmann::json(nullptr)},
                    {"tolerance", r.tolerance},
                    {"comparison", r.comparison == Comparison::kAtMost ? "<=" : ">"},
                    {"passed", r.passed},
                    {"details", r.details}});
  }
  return {{"seed", seed}, {"all_passed", all_passed()}, {"checks", std::move(list)}};
}

Report run_checks(const std::vector<const Check*>& checks, std::uint64_t seed) {
  Report report;
  report.seed = seed;
  for (const Check* check : checks) {
    try {
      report.checks.push_back(check->run(seed));
    } catch (const std::exception& e) {
      CheckResult failed;
      failed.id = check->id;
      failed.criterion = check->criterion;
      failed.description = check->description;
      failed.statistic = std::numeric_limits<double>::quiet_NaN();
      failed.passed = false;
      failed.details = {{"error", e.what()}};
      report.checks.push_back(std::move(failed));
    }
  }
  return report;
}

std::string summary_line(const CheckResult& r) {
  char buffer[96];
  std::snprintf(buffer, sizeof buffer, "%.6g %s %.6g", r.statistic,
                r.comparison == Comparison::kAtMost ? "<=" : ">", r.tolerance);
  return std::string(r.passed ? "PASS" : "FAIL") + " [" + std::to_string(r.criterion) +
         "] " + r.id + ": " + buffer;
}

}  // namespace feller::verify
