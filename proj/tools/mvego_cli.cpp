#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "mvego/benchmarks.hpp"
#include "mvego/gp.hpp"
#include "mvego/harness.hpp"
#include "mvego/training.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

std::vector<std::string> split_methods(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void print_summary(const std::vector<mvego::harness::SummaryRow>& rows) {
  fmt::print("{:<6} {:>14} {:>12} {:>16} {:>10} {:>14} {:>6}\n", "method", "mean", "dispersion%",
             "mean constraint", "category", "hyperparams", "evals");
  for (const auto& r : rows) {
    std::string constraint = "[-]";
    if (!r.mean_constraints.empty()) {
      constraint.clear();
      for (std::size_t i = 0; i < r.mean_constraints.size(); ++i) {
        constraint += fmt::format("{}{:.4g}", i > 0 ? ";" : "", r.mean_constraints[i]);
      }
    }
    const std::string category =
        r.correct_category ? fmt::format("{}/{}", *r.correct_category, r.runs) : std::string("[-]");
    fmt::print("{:<6} {:>14.6g} {:>12.4g} {:>16} {:>10} {:>14} {:>6}\n", r.method, r.mean, r.dispersion,
               constraint, category, r.hyperparameters, r.evaluations);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained mixed-variable EGO campaigns"};
  app.require_subcommand(1);
  bool verbose = false;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");
  app.add_flag("-q,--quiet", quiet, "Only warnings and errors");

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::optional<std::size_t> repetitions;
  std::string methods;
  std::string output;
  auto* run = app.add_subcommand("run", "Run a benchmark campaign from a JSON configuration");
  run->add_option("config", config_path, "Campaign configuration file")->required();
  run->add_option("--seed", seed, "Base seed override");
  run->add_option("--jobs", jobs, "Worker threads");
  run->add_option("--methods", methods, "Comma-separated subset of HeHS,HoHS,CS,CW,GA");
  run->add_option("--repetitions", repetitions, "Number of repetitions");
  run->add_option("--output", output, "Output directory override");

  std::string benchmark;
  std::size_t resolution = 400;
  std::string cache = "data/oracle_cache.jsonl";
  std::uint64_t oracle_seed = 0;
  auto* oracle = app.add_subcommand("oracle", "Compute a benchmark's reference optimum and cache it");
  oracle->add_option("benchmark", benchmark, "branin, branin_augmented or goldstein")->required();
  oracle->add_option("--resolution", resolution, "Grid points per continuous axis")->capture_default_str();
  oracle->add_option("--cache", cache, "Oracle cache file")->capture_default_str();
  oracle->add_option("--seed", oracle_seed, "Seed of the multi-start search (q > 2)");

  std::string run_dir;
  auto* summarize = app.add_subcommand("summarize", "Rebuild the summary table of a campaign directory");
  summarize->add_option("run-dir", run_dir, "Campaign output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : quiet ? spdlog::level::warn : spdlog::level::info);

  try {
    if (*run) {
      auto config = mvego::harness::load_config(config_path);
      if (seed) config.base_seed = *seed;
      if (jobs) config.jobs = *jobs;
      if (repetitions) config.repetitions = *repetitions;
      if (!methods.empty()) config.methods = split_methods(methods);
      if (!output.empty()) config.output_dir = output;
      config.validate();
      const auto result = mvego::harness::run_campaign(config);
      print_summary(result.summary);
      fmt::print("outputs written to {}\n", config.output_dir.string());
      if (result.any_failed) {
        spdlog::error("at least one run stopped on a numerical failure");
        return kNumericalError;
      }
    } else if (*oracle) {
      const auto problem = mvego::bench::make_problem(benchmark);
      const auto result = mvego::bench::oracle_optimum(problem, resolution, oracle_seed);
      if (!result.feasible) {
        spdlog::error("no feasible point of {} at resolution {}", benchmark, resolution);
        return kNumericalError;
      }
      mvego::bench::write_oracle_cache(cache, result);
      fmt::print("{}\n", mvego::bench::to_json_line(result));
    } else if (*summarize) {
      print_summary(mvego::harness::summarize(run_dir));
    }
  } catch (const mvego::harness::ConfigError& e) {
    spdlog::error("{}", e.what());
    return kConfigError;
  } catch (const mvego::DomainError& e) {
    spdlog::error("{}", e.what());
    return kConfigError;
  } catch (const mvego::TrainingError& e) {
    spdlog::error("numerical failure: {}", e.what());
    return kNumericalError;
  } catch (const mvego::ConditioningError& e) {
    spdlog::error("numerical failure: {}", e.what());
    return kNumericalError;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
