// feller: analytic tables, coalescent trees, simulation dumps and the
// verification suite for the Feller diffusion and its coalescent.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "feller/commands.hpp"

namespace {

using feller::app::RunConfig;

void add_model_flags(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--alpha", c.alpha, "growth parameter alpha");
  cmd->add_option("--x0", c.x0, "initial scaled population");
  cmd->add_option("--t", c.t, "time since initiation");
  cmd->add_option("--s", c.s, "lookback time (0 < s <= t), or the BD scale");
}

void add_common_flags(CLI::App* cmd, RunConfig& c, std::string& output) {
  cmd->add_option("--seed", c.seed, "random seed (default 20230601)");
  cmd->add_option("--format", c.format, "output format");
  cmd->add_option("--output", output, "write to this file instead of stdout");
}

bool write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Feller diffusion ancestry: ancestor-count laws, quasi-stationary tables,\n"
      "reversed reconstructed trees, exact simulators and acceptance checks.\n"
      "Every random command defaults to seed 20230601. Exit status: 0 success,\n"
      "1 verification failure, 2 usage error."};
  app.require_subcommand(1);

  RunConfig config;
  std::string output;
  std::string times_output;

  auto* pmf = app.add_subcommand("pmf", "ancestor-count law of the population or a sample");
  add_model_flags(pmf, config);
  add_common_flags(pmf, config, output);
  pmf->add_option("--n", config.n, "sample size; omit for the whole population");
  pmf->add_flag("--conditioned", config.conditioned,
                "condition the population law on survival");

  auto* qs = app.add_subcommand("qs", "quasi-stationary tables for alpha < 0");
  add_model_flags(qs, config);
  add_common_flags(qs, config, output);
  qs->add_option("--n", config.n, "sample size for the sample ancestor law");
  qs->add_option("--k-max", config.k_max, "largest k for T_k and W_k rows");
  qs->add_option("--w-max", config.w_max, "end of the W_k survival grid");
  qs->add_option("--w-points", config.w_points, "points in the W_k survival grid");

  auto* tree = app.add_subcommand("rrp-tree", "coalescent tree from the reversed reconstructed process");
  add_model_flags(tree, config);
  add_common_flags(tree, config, output);
  tree->add_option("--n", config.n, "number of leaves");
  tree->add_option("--times-output", times_output, "also write the coalescence-time CSV here");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo dumps and goodness-of-fit reports");
  add_model_flags(simulate, config);
  add_common_flags(simulate, config, output);
  simulate->add_option("--what", config.what,
                       "feller | ancestors | subsample | bd | bgw | nhpp | sample-waits")
      ->required();
  simulate->add_option("--replicates", config.replicates, "number of replicates");
  simulate->add_flag("--gof", config.gof, "emit a goodness-of-fit report instead of samples");
  simulate->add_option("--n", config.n, "sample size");
  simulate->add_option("--k", config.k, "population ancestors (subsample)");
  simulate->add_option("--tau", config.tau, "lookback time tau (nhpp)");
  simulate->add_option("--x", config.x, "current scaled population (nhpp, sample-waits)");
  simulate->add_option("--m0", config.m0, "initial count (bd, bgw)");
  simulate->add_option("--y0", config.y0, "initial total population (bgw)");
  simulate->add_option("--generations", config.generations, "generations (bgw)");
  simulate->add_option("--offspring", config.offspring, "poisson | geometric (bgw)");

  auto* verify = app.add_subcommand("verify", "run the acceptance checks");
  add_common_flags(verify, config, output);
  verify->add_option("--only", config.only,
                     "check ids or criterion numbers to run (repeatable)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return feller::app::kExitUsage;
  }

  for (auto* sub : app.get_subcommands()) config.command = sub->get_name();

  feller::app::CommandResult result;
  try {
    result = feller::app::run_command(config);
  } catch (const feller::app::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return feller::app::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return feller::app::kExitVerificationFailure;
  }

  if (!write_text(output, result.output)) {
    std::cerr << "error: cannot write " << output << "\n";
    return feller::app::kExitVerificationFailure;
  }
  if (!times_output.empty() && !write_text(times_output, result.times_csv)) {
    std::cerr << "error: cannot write " << times_output << "\n";
    return feller::app::kExitVerificationFailure;
  }
  return result.status;
}
