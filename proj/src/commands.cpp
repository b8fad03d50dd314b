#include "feller/commands.hpp"

#include <cmath>
#include <functional>

#include "json.hpp"

#include "feller/ancestry.hpp"
#include "feller/error.hpp"
#include "feller/format.hpp"
#include "feller/gof.hpp"
#include "feller/model.hpp"
#include "feller/quasi_stationary.hpp"
#include "feller/random.hpp"
#include "feller/reconstructed.hpp"
#include "feller/rrp_tree.hpp"
#include "feller/simulate.hpp"

namespace feller::app {

namespace {

constexpr double kQsMassTolerance = 1e-12;

template <typename T>
T need(const std::optional<T>& value, const char* flag, const std::string& command) {
  if (!value) throw UsageError(command + ": missing required flag " + flag);
  return *value;
}

std::string format_or(const RunConfig& config, const char* fallback,
                      std::initializer_list<const char*> allowed) {
  const std::string format = config.format.empty() ? fallback : config.format;
  for (const char* a : allowed) {
    if (format == a) return format;
  }
  throw UsageError(config.command + ": unsupported --format " + format);
}

// Turns library domain errors into usage errors: every domain violation
// reachable from the command line stems from a flag value.
template <typename F>
CommandResult guarded(F&& body) {
  try {
    return body();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

std::string pmf_csv(const char* index_name, const DiscretePmf& table) {
  std::string out = std::string(index_name) + ",probability,truncation_bound\n";
  const std::string bound = format_real(table.truncation_tail_bound);
  for (std::int64_t k = table.support_start; k < table.support_end(); ++k) {
    out += std::to_string(k) + "," + format_real(table.at(k)) + "," + bound + "\n";
  }
  return out;
}

// Doubles come out in the shortest form that round-trips exactly.
std::string dump_json(const nlohmann::json& value) {
  return value.dump(2) + "\n";
}

std::string pmf_json(const char* quantity, const char* index_name,
                     const DiscretePmf& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::int64_t k = table.support_start; k < table.support_end(); ++k) {
    rows.push_back({{index_name, k}, {"probability", table.at(k)}});
  }
  return dump_json({{"quantity", quantity},
                    {"total_mass", table.total_mass},
                    {"truncation_bound", table.truncation_tail_bound},
                    {"rows", rows}});
}

}  // namespace

CommandResult run_pmf(const RunConfig& config) {
  return guarded([&] {
    const std::string format = format_or(config, "csv", {"csv", "json"});
    const TimeWindow window(need(config.t, "--t", "pmf"), need(config.s, "--s", "pmf"));
    const ModelParams params(need(config.alpha, "--alpha", "pmf"),
                             need(config.x0, "--x0", "pmf"));
    CommandResult result;
    if (config.n) {
      const DiscretePmf table = sample_ancestors_table(*config.n, window, params);
      result.output = format == "csv" ? pmf_csv("j", table)
                                      : pmf_json("sample_ancestors", "j", table);
    } else {
      const DiscretePmf table =
          population_ancestors_table(window, params, config.conditioned);
      result.output = format == "csv" ? pmf_csv("k", table)
                                      : pmf_json("population_ancestors", "k", table);
    }
    return result;
  });
}

CommandResult run_qs(const RunConfig& config) {
  return guarded([&] {
    const std::string format = format_or(config, "csv", {"csv", "json"});
    const double alpha = need(config.alpha, "--alpha", "qs");
    if (!(alpha < 0.0)) throw UsageError("qs: requires --alpha < 0");
    const double s = need(config.s, "--s", "qs");
    if (config.k_max < 2) throw UsageError("qs: --k-max must be >= 2");
    if (config.w_points < 2) throw UsageError("qs: --w-points must be >= 2");
    const double w_max = config.w_max.value_or(4.0 / -alpha);
    if (!(w_max > 0.0)) throw UsageError("qs: --w-max must be > 0");

    struct Row {
      std::string quantity;
      std::int64_t k;
      std::optional<double> argument;
      double value;
    };
    std::vector<Row> rows;
    double cumulative = 0.0;
    for (std::int64_t k = 1; cumulative < 1.0 - kQsMassTolerance; ++k) {
      const double p = qs::population_ancestors_pmf(k, s, alpha);
      rows.push_back({"ancestor_pmf", k, s, p});
      cumulative += p;
      if (p == 0.0) break;
    }
    for (std::int64_t k = 2; k <= config.k_max; ++k) {
      rows.push_back({"tk_survival", k, s, qs::tk_survival(k, s, alpha)});
    }
    for (std::int64_t k = 2; k <= config.k_max; ++k) {
      rows.push_back({"mean_wk", k, std::nullopt, qs::mean_wk(k, alpha)});
    }
    if (config.n) {
      for (std::int64_t j = 1; j <= *config.n; ++j) {
        rows.push_back({"sample_ancestor_pmf", j, s,
                        qs::sample_ancestors_pmf(j, *config.n, s, alpha)});
      }
    }
    for (std::int64_t k = 2; k <= config.k_max; ++k) {
      for (std::int64_t i = 0; i < config.w_points; ++i) {
        const double w = w_max * static_cast<double>(i) /
                         static_cast<double>(config.w_points - 1);
        rows.push_back({"wk_survival", k, w, qs::wk_survival(w, k, alpha)});
      }
    }

    CommandResult result;
    if (format == "csv") {
      result.output = "quantity,k,argument,value\n";
      for (const Row& r : rows) {
        result.output += r.quantity + "," + std::to_string(r.k) + "," +
                         (r.argument ? format_real(*r.argument) : "") + "," +
                         format_real(r.value) + "\n";
      }
    } else {
      nlohmann::json list = nlohmann::json::array();
      for (const Row& r : rows) {
        nlohmann::json row{{"quantity", r.quantity}, {"k", r.k}, {"value", r.value}};
        row["argument"] = r.argument ? nlohmann::json(*r.argument) : nlohmann::json();
        list.push_back(std::move(row));
      }
      result.output = dump_json({{"alpha", alpha}, {"s", s}, {"rows", list}});
    }
    return result;
  });
}

CommandResult run_rrp_tree(const RunConfig& config) {
  return guarded([&] {
    const std::string format = format_or(config, "newick", {"newick", "csv", "json"});
    const double alpha = need(config.alpha, "--alpha", "rrp-tree");
    if (!(alpha > 0.0)) throw UsageError("rrp-tree: requires --alpha > 0");
    const std::int64_t n = need(config.n, "--n", "rrp-tree");
    const double s = need(config.s, "--s", "rrp-tree");
    SeededSource source(config.seed);
    const rrp::CoalescentTree tree = rrp::generate_rrp_tree(n, s, alpha, source);

    CommandResult result;
    result.times_csv = rrp::to_times_csv(tree);
    if (format == "newick") {
      result.output = rrp::to_newick(tree) + "\n";
    } else if (format == "csv") {
      result.output = result.times_csv;
    } else {
      result.output = dump_json({{"leaf_count", tree.leaf_count},
                                 {"s", s},
                                 {"alpha", alpha},
                                 {"seed", config.seed},
                                 {"coalescence_times", tree.coalescence_times},
                                 {"newick", rrp::to_newick(tree)}});
    }
    return result;
  });
}

namespace {

std::string replicate_csv(const std::vector<std::string>& values) {
  std::string out = "replicate,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += std::to_string(i + 1) + "," + values[i] + "\n";
  }
  return out;
}

sim::Offspring parse_offspring(const std::string& name) {
  if (name == "poisson") return sim::Offspring::kPoisson;
  if (name == "geometric") return sim::Offspring::kGeometric;
  throw UsageError("simulate: --offspring must be poisson or geometric");
}

// Mean offspring solving alpha = y0 log(lambda) / sigma^2(lambda).
double offspring_mean(double alpha, std::int64_t y0, sim::Offspring offspring) {
  double lambda = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double sigma2 =
        offspring == sim::Offspring::kPoisson ? lambda : lambda * (1.0 + lambda);
    lambda = std::exp(alpha * sigma2 / static_cast<double>(y0));
  }
  return lambda;
}

}  // namespace

CommandResult run_simulate(const RunConfig& config) {
  return guarded([&] {
    const std::string& what = config.what;
    // Dumps are CSV; a --gof report is JSON.
    format_or(config, config.gof ? "json" : "csv", {config.gof ? "json" : "csv"});
    if (config.replicates < 1) throw UsageError("simulate: --replicates must be >= 1");
    const auto reps = static_cast<std::size_t>(config.replicates);
    SeededSource source(config.seed);
    std::vector<std::string> values;
    values.reserve(reps);
    std::vector<std::int64_t> counts;
    std::vector<double> reals;
    std::function<GofReport()> gof;

    if (what == "feller") {
      const double t = need(config.t, "--t", "simulate feller");
      const ModelParams params(need(config.alpha, "--alpha", "simulate feller"),
                               need(config.x0, "--x0", "simulate feller"));
      for (std::size_t i = 0; i < reps; ++i) {
        values.push_back(format_real(sim::sample_feller_transition(t, params, source)));
      }
    } else if (what == "ancestors") {
      const TimeWindow window(need(config.t, "--t", "simulate ancestors"),
                              need(config.s, "--s", "simulate ancestors"));
      const ModelParams params(need(config.alpha, "--alpha", "simulate ancestors"),
                               need(config.x0, "--x0", "simulate ancestors"));
      for (std::size_t i = 0; i < reps; ++i) {
        counts.push_back(sim::sample_population_ancestors(window, params, source));
      }
      gof = [&, window, params] {
        return chi_square_test(population_ancestors_table(window, params, false), counts);
      };
    } else if (what == "subsample") {
      const std::int64_t n = need(config.n, "--n", "simulate subsample");
      const std::int64_t k = need(config.k, "--k", "simulate subsample");
      for (std::size_t i = 0; i < reps; ++i) {
        counts.push_back(sim::sample_subsample_ancestors(n, k, source));
      }
      gof = [&, n, k] {
        DiscretePmf table;
        table.support_start = 1;
        for (std::int64_t j = 1; j <= n; ++j) {
          table.probabilities.push_back(j <= k ? sample_given_population_pmf(j, n, k) : 0.0);
        }
        return chi_square_test(table, counts);
      };
    } else if (what == "bd") {
      const double s = need(config.s, "--s", "simulate bd");
      const double alpha = need(config.alpha, "--alpha", "simulate bd");
      const double horizon = need(config.t, "--t", "simulate bd");
      const std::int64_t m0 = config.m0.value_or(1);
      const rrp::BdRates rates = rrp::bd_rates(s, alpha);
      for (std::size_t i = 0; i < reps; ++i) {
        counts.push_back(sim::simulate_bd(m0, rates, horizon, source).back().count);
      }
      gof = [&, rates, horizon, m0] {
        if (m0 != 1) throw UsageError("simulate bd --gof: requires --m0 1");
        const double q = rates.lambda_hat * rrp::bd_b(horizon, rates);
        DiscretePmf geometric;
        geometric.support_start = 1;
        for (double mass = 1.0 - q; mass > 1e-14; mass *= q) {
          geometric.probabilities.push_back(mass);
        }
        std::vector<std::int64_t> survivors;
        for (std::int64_t c : counts) {
          if (c > 0) survivors.push_back(c);
        }
        return chi_square_test(geometric, survivors);
      };
    } else if (what == "bgw") {
      const std::int64_t y0 = need(config.y0, "--y0", "simulate bgw");
      const std::int64_t generations =
          need(config.generations, "--generations", "simulate bgw");
      const double alpha = need(config.alpha, "--alpha", "simulate bgw");
      const sim::Offspring offspring = parse_offspring(config.offspring);
      const double lambda = offspring_mean(alpha, y0, offspring);
      const double sigma2 =
          offspring == sim::Offspring::kPoisson ? lambda : lambda * (1.0 + lambda);
      const BgwScale scale(y0, lambda, sigma2, config.m0.value_or(y0));
      for (std::size_t i = 0; i < reps; ++i) {
        counts.push_back(
            sim::simulate_bgw(scale, offspring, generations, source).back());
      }
    } else if (what == "nhpp") {
      const double x = need(config.x, "--x", "simulate nhpp");
      const double alpha = need(config.alpha, "--alpha", "simulate nhpp");
      const double tau = need(config.tau, "--tau", "simulate nhpp");
      for (std::size_t i = 0; i < reps; ++i) {
        counts.push_back(static_cast<std::int64_t>(
            sim::sample_coalescent_times_nhpp(x, alpha, tau, source).size()));
      }
      gof = [&, x, alpha, tau] {
        return chi_square_test(rrp::ancestors_at_tau_table(tau, x, alpha), counts);
      };
    } else if (what == "sample-waits") {
      const std::int64_t n = need(config.n, "--n", "simulate sample-waits");
      const double x = need(config.x, "--x", "simulate sample-waits");
      const double alpha = need(config.alpha, "--alpha", "simulate sample-waits");
      if (n < 2) throw UsageError("simulate sample-waits: --n must be >= 2");
      std::string out = "replicate";
      for (std::int64_t j = 2; j <= n; ++j) out += ",w" + std::to_string(j);
      out += "\n";
      for (std::size_t i = 0; i < reps; ++i) {
        const auto waits = sim::sample_sample_waiting_times(n, x, alpha, 500, source);
        out += std::to_string(i + 1);
        for (double w : waits) out += "," + format_real(w);
        out += "\n";
      }
      if (config.gof) throw UsageError("simulate sample-waits: no --gof comparison");
      CommandResult result;
      result.output = std::move(out);
      return result;
    } else {
      throw UsageError(
          "simulate: --what must be one of feller, ancestors, subsample, bd, bgw, "
          "nhpp, sample-waits");
    }

    CommandResult result;
    if (config.gof) {
      if (!gof) throw UsageError("simulate " + what + ": no --gof comparison");
      result.output = dump_json(gof().to_json());
      return result;
    }
    for (std::int64_t c : counts) values.push_back(std::to_string(c));
    result.output = replicate_csv(values);
    return result;
  });
}

CommandResult run_verify(const RunConfig& config) {
  std::vector<const verify::Check*> checks;
  try {
    checks = verify::select_checks(config.only);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const verify::Report report = verify::run_checks(checks, config.seed);
  CommandResult result;
  result.output = dump_json(report.to_json());
  result.status = report.all_passed() ? kExitSuccess : kExitVerificationFailure;
  return result;
}

CommandResult run_command(const RunConfig& config) {
  if (config.command == "pmf") return run_pmf(config);
  if (config.command == "qs") return run_qs(config);
  if (config.command == "rrp-tree") return run_rrp_tree(config);
  if (config.command == "simulate") return run_simulate(config);
  if (config.command == "verify") return run_verify(config);
  throw UsageError("unknown command: " + config.command);
}

}  // namespace feller::app
