#ifndef FELLER_VERIFY_CHECKS_HPP_
#define FELLER_VERIFY_CHECKS_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace feller::verify {

inline constexpr std::uint64_t kDefaultSeed = 20230601;

// How `statistic` is compared with `tolerance`.
enum class Comparison {
  kAtMost,    // pass iff statistic <= tolerance (errors, distances)
  kAbove,     // pass iff statistic > tolerance (p-values)
};

struct CheckResult {
  std::string id;
  int criterion = 0;
  std::string description;
  double statistic = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::kAtMost;
  bool passed = false;
  nlohmann::json details = nlohmann::json::object();
};

struct Check {
  std::string id;
  int criterion;
  std::string description;
  std::function<CheckResult(std::uint64_t seed)> run;
};

// Every acceptance check, in criterion order.
const std::vector<Check>& all_checks();

// Selects checks whose id or criterion number appears in `only`; all checks
// when `only` is empty. Unknown selectors throw DomainError.
std::vector<const Check*> select_checks(const std::vector<std::string>& only);

struct Report {
  std::uint64_t seed = kDefaultSeed;
  std::vector<CheckResult> checks;
  bool all_passed() const;
  nlohmann::json to_json() const;
};

Report run_checks(const std::vector<const Check*>& checks, std::uint64_t seed);

// One line per check: "PASS [criterion] id: statistic <op> tolerance".
std::string summary_line(const CheckResult& result);

}  // namespace feller::verify

#endif  // FELLER_VERIFY_CHECKS_HPP_
