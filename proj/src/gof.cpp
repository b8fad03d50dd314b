#include "feller/gof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "feller/error.hpp"

namespace feller {

using detail::require;

namespace {

constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kPosInf = std::numeric_limits<std::int64_t>::max();
constexpr std::size_t kMinChiSquareSamples = 1000;

struct FineBin {
  std::int64_t lo;
  std::int64_t hi;
  std::int64_t observed = 0;
  double expected = 0.0;
};

std::string range_label(std::int64_t lo, std::int64_t hi) {
  if (lo == hi) return std::to_string(lo);
  const std::string left = lo == kNegInf ? "" : std::to_string(lo);
  const std::string right = hi == kPosInf ? "" : std::to_string(hi);
  return left + ".." + right;
}

}  // namespace

const char* to_string(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::kChiSquare:
      return "chi_square";
    case StatisticKind::kKolmogorovSmirnov:
      return "kolmogorov_smirnov";
    case StatisticKind::kExactMatch:
      return "exact_match";
  }
  return "unknown";
}

nlohmann::json GofReport::to_json() const {
  nlohmann::json out;
  out["statistic_kind"] = to_string(kind);
  out["statistic"] = statistic;
  out["p_value"] = p_value;
  out["n_samples"] = n_samples;
  out["deficit_mass"] = deficit_mass;
  nlohmann::json bin_list = nlohmann::json::array();
  for (const auto& bin : bins) {
    bin_list.push_back(
        {{"label", bin.label}, {"observed", bin.observed}, {"expected", bin.expected}});
  }
  out["bins"] = std::move(bin_list);
  return out;
}

GofReport chi_square_test(const DiscretePmf& pmf,
                          const std::vector<std::int64_t>& samples) {
  require(samples.size() >= kMinChiSquareSamples,
          "chi_square_test: need at least 1000 samples");
  require(!pmf.probabilities.empty(), "chi_square_test: empty table");
  const auto n = static_cast<double>(samples.size());
  const std::int64_t start = pmf.support_start;
  const std::int64_t end = pmf.support_end();

  GofReport report;
  report.n_samples = static_cast<std::int64_t>(samples.size());
  report.deficit_mass = std::max(0.0, 1.0 - pmf.total_mass);

  std::vector<FineBin> fine;
  fine.push_back({kNegInf, start - 1, 0, n * report.deficit_mass});
  for (std::int64_t k = start; k < end; ++k) {
    fine.push_back({k, k, 0, n * std::max(0.0, pmf.at(k))});
  }
  const double tail_mass = std::max(0.0, pmf.total_mass - pmf.listed_mass());
  fine.push_back({end, kPosInf, 0, n * tail_mass});
  for (std::int64_t value : samples) {
    std::size_t index;
    if (value < start) {
      index = 0;
    } else if (value >= end) {
      index = fine.size() - 1;
    } else {
      index = static_cast<std::size_t>(value - start + 1);
    }
    ++fine[index].observed;
  }

  // Degenerate law: one bin carries all the mass.
  std::size_t atoms = 0;
  std::size_t atom_index = 0;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    if (fine[i].expected > 0.0) {
      ++atoms;
      atom_index = i;
    }
  }
  if (atoms == 1) {
    const FineBin& atom = fine[atom_index];
    report.kind = StatisticKind::kExactMatch;
    report.statistic = n - static_cast<double>(atom.observed);
    report.p_value = atom.observed == report.n_samples ? 1.0 : 0.0;
    report.bins.push_back({range_label(atom.lo, atom.hi), atom.observed, atom.expected});
    return report;
  }

  // Drop empty edge bins, then pool left to right.
  std::vector<FineBin> pooled;
  FineBin current{0, 0, 0, 0.0};
  bool open = false;
  for (const FineBin& bin : fine) {
    if (bin.expected == 0.0 && bin.observed == 0) continue;
    if (!open) {
      current = bin;
      open = true;
    } else {
      current.hi = bin.hi;
      current.observed += bin.observed;
      current.expected += bin.expected;
    }
    if (current.expected >= kMinExpectedCount) {
      pooled.push_back(current);
      open = false;
    }
  }
  if (open) {
    if (pooled.empty()) {
      pooled.push_back(current);
    } else {
      pooled.back().hi = current.hi;
      pooled.back().observed += current.observed;
      pooled.back().expected += current.expected;
    }
  }

  double statistic = 0.0;
  for (const FineBin& bin : pooled) {
    report.bins.push_back({range_label(bin.lo, bin.hi), bin.observed, bin.expected});
    if (bin.expected == 0.0) {
      statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    const double diff = static_cast<double>(bin.observed) - bin.expected;
    statistic += diff * diff / bin.expected;
  }
  report.kind = StatisticKind::kChiSquare;
  report.statistic = statistic;
  const double df = static_cast<double>(pooled.size()) - 1.0;
  if (df < 1.0) {
    report.p_value = 1.0;
  } else if (std::isinf(statistic)) {
    report.p_value = 0.0;
  } else {
    report.p_value = boost::math::gamma_q(df / 2.0, statistic / 2.0);
  }
  return report;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.0) {
    // Jacobi-transformed series, fast for small lambda.
    const double pi = std::numbers::pi;
    double sum = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double m = 2.0 * k - 1.0;
      sum += std::exp(-m * m * pi * pi / (8.0 * lambda * lambda));
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

GofReport ks_test(std::vector<double> samples,
                  const std::function<double(double)>& cdf) {
  require(!samples.empty(), "ks_test: need at least one sample");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double distance = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    distance = std::max({distance, above, below});
  }
  GofReport report;
  report.kind = StatisticKind::kKolmogorovSmirnov;
  report.statistic = distance;
  report.n_samples = static_cast<std::int64_t>(samples.size());
  const double root_n = std::sqrt(n);
  report.p_value = kolmogorov_survival((root_n + 0.12 + 0.11 / root_n) * distance);
  return report;
}

}  // namespace feller
