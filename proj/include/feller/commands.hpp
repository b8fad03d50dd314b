#ifndef FELLER_COMMANDS_HPP_
#define FELLER_COMMANDS_HPP_

// Command implementations behind the `feller` executable. Each command is a
// pure function of its RunConfig and returns the bytes to emit, so runs can be
// compared for determinism without spawning processes.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "feller/verify/checks.hpp"

namespace feller::app {

// Invalid flag values or combinations; the executable exits with status 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::string command;  // pmf, qs, rrp-tree, simulate, verify

  // Model and window.
  std::optional<double> alpha;
  std::optional<double> x0;
  std::optional<double> t;
  std::optional<double> s;
  std::optional<double> tau;
  std::optional<double> x;
  std::optional<std::int64_t> n;
  bool conditioned = false;

  // qs
  std::int64_t k_max = 10;
  std::optional<double> w_max;
  std::int64_t w_points = 17;

  // simulate
  std::string what;
  std::int64_t replicates = 1000;
  bool gof = false;
  std::optional<std::int64_t> k;
  std::optional<std::int64_t> m0;
  std::optional<std::int64_t> y0;
  std::optional<std::int64_t> generations;
  std::string offspring = "poisson";

  // verify
  std::vector<std::string> only;

  std::uint64_t seed = verify::kDefaultSeed;
  std::string format;  // empty selects the command's default
};

struct CommandResult {
  std::string output;
  std::string times_csv;  // rrp-tree only
  int status = kExitSuccess;
};

CommandResult run_pmf(const RunConfig& config);
CommandResult run_qs(const RunConfig& config);
CommandResult run_rrp_tree(const RunConfig& config);
CommandResult run_simulate(const RunConfig& config);
CommandResult run_verify(const RunConfig& config);

// Dispatches on config.command.
CommandResult run_command(const RunConfig& config);

}  // namespace feller::app

#endif  // FELLER_COMMANDS_HPP_
