#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvego/benchmarks.hpp"
#include "mvego/ego.hpp"

namespace mvego::harness {

/// Invalid campaign configuration; raised before any evaluation happens.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> methods{"HeHS", "HoHS", "CS", "CW", "GA"};
  return methods;
}

struct CampaignConfig {
  std::string benchmark;
  std::vector<std::string> methods = known_methods();
  std::size_t n_initial = 0;
  std::size_t n_infill = 0;
  std::size_t ga_population = 0;
  std::size_t ga_generations = 0;
  std::size_t repetitions = 10;
  std::uint64_t base_seed = 1;
  TrainerConfig trainer;
  GaConfig infill_ga;
  std::filesystem::path output_dir = "campaign";
  std::size_t jobs = 1;
  std::filesystem::path oracle_cache = "data/oracle_cache.jsonl";

  /// Budgets of the named benchmark, every method, ten repetitions.
  static CampaignConfig defaults(const std::string& benchmark);
  /// Missing keys take the benchmark defaults; unknown keys are rejected.
  static CampaignConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;
};

CampaignConfig load_config(const std::filesystem::path& path);

struct JobResult {
  std::string method;
  std::size_t repetition = 0;
  RunRecord record;
  std::size_t true_calls = 0;  ///< counted calls of the problem's evaluate
};

struct SummaryRow {
  std::string method;
  std::size_t runs = 0;
  std::size_t feasible_runs = 0;
  double mean = 0.0;
  double dispersion = 0.0;  ///< sample std / |mean| * 100
  /// Mean over feasible runs of each constraint at the final optimum, in the
  /// problem's declared sign convention; empty for the penalized GA.
  std::vector<double> mean_constraints;
  std::optional<std::size_t> correct_category;
  std::string hyperparameters;
  std::size_t evaluations = 0;  ///< per run; 0 when runs disagree
};

struct ConvergenceRow {
  std::size_t infill = 0;
  std::size_t evaluations = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

struct CampaignResult {
  std::vector<JobResult> jobs;
  std::vector<SummaryRow> summary;
  bool any_failed = false;
};

/// Runs every (repetition, method) job of a benchmark campaign and writes
/// config.json, runs/, journal.jsonl, summary.csv and convergence_*.csv.
CampaignResult run_campaign(const CampaignConfig& config);
/// Same protocol on a user-supplied problem; config.benchmark is used as a label.
CampaignResult run_campaign(const CampaignConfig& config, const Problem& problem,
                            std::optional<std::size_t> oracle_category = std::nullopt);

/// Hyperparameter column entry for a method on a space.
std::string hyperparameter_label(const std::string& method, const MixedSpace& space);

std::vector<SummaryRow> summarize(const std::vector<JobResult>& jobs, const CampaignConfig& config,
                                  const MixedSpace& space, std::optional<std::size_t> oracle_category);
/// Rebuilds the summary of a finished campaign directory and rewrites summary.csv.
std::vector<SummaryRow> summarize(const std::filesystem::path& run_dir);

/// Mean and min/max envelope of the incumbent per infill index. Throws
/// ConfigError when the runs do not share a budget.
std::vector<ConvergenceRow> export_convergence(const std::vector<const RunRecord*>& runs);

std::string format_summary_csv(const std::vector<SummaryRow>& rows);
std::string format_convergence_csv(const std::vector<ConvergenceRow>& rows);

nlohmann::json to_json(const RunRecord& record);
RunRecord run_from_json(const nlohmann::json& j);

}  // namespace mvego::harness
