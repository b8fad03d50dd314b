#ifndef FELLER_GOF_HPP_
#define FELLER_GOF_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "feller/ancestry.hpp"

namespace feller {

enum class StatisticKind { kChiSquare, kKolmogorovSmirnov, kExactMatch };

const char* to_string(StatisticKind kind);

struct GofBin {
  std::string label;
  std::int64_t observed;
  double expected;
};

struct GofReport {
  StatisticKind kind = StatisticKind::kChiSquare;
  double statistic = 0.0;
  double p_value = 1.0;
  std::int64_t n_samples = 0;
  std::vector<GofBin> bins;  // empty for Kolmogorov-Smirnov
  // Mass of the analytic law below its support_start, reported separately
  // from the listed probabilities.
  double deficit_mass = 0.0;

  nlohmann::json to_json() const;
};

inline constexpr double kMinExpectedCount = 5.0;

// Pearson chi-square of integer samples against a tabulated law. Values
// below support_start fall in a deficit bin with expected count n (1 -
// total_mass); values past the table fall in a tail bin. Adjacent bins are
// pooled until every expected count is >= 5. A law with a single atom gives
// an exact-match report instead (p = 1 iff every sample equals the atom).
GofReport chi_square_test(const DiscretePmf& pmf,
                          const std::vector<std::int64_t>& samples);

// Kolmogorov-Smirnov test against a continuous CDF; the p-value uses the
// asymptotic Kolmogorov law with Stephens' finite-n correction.
GofReport ks_test(std::vector<double> samples,
                  const std::function<double(double)>& cdf);

// Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_survival(double lambda);

}  // namespace feller

#endif  // FELLER_GOF_HPP_
