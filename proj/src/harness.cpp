#include "mvego/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace mvego::harness {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double number(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

std::string fixed(double v) { return std::isfinite(v) ? fmt::format("{:.12g}", v) : "nan"; }

template <class T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

bool is_smbdo(const std::string& method) { return method != "GA"; }

json sample_json(const EvaluatedSample& s) {
  json j;
  j["x"] = s.point.x;
  j["z"] = s.point.z;
  j["objective"] = number(s.objective);
  json g = json::array();
  for (double v : s.constraints) g.push_back(number(v));
  j["constraints"] = g;
  j["feasible"] = s.feasible;
  return j;
}

EvaluatedSample sample_from_json(const json& j) {
  EvaluatedSample s;
  s.point.x = j.at("x").get<std::vector<double>>();
  s.point.z = j.at("z").get<std::vector<int>>();
  s.objective = number(j.at("objective"));
  for (const auto& g : j.at("constraints")) s.constraints.push_back(number(g));
  s.feasible = j.at("feasible").get<bool>();
  return s;
}

json space_json(const MixedSpace& space) {
  json bounds = json::array();
  for (const auto& b : space.bounds()) bounds.push_back({b.lower, b.upper});
  return {{"bounds", bounds}, {"levels", space.levels()}};
}

MixedSpace space_from_json(const json& j) {
  std::vector<Bounds> bounds;
  for (const auto& b : j.at("bounds")) bounds.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
  return MixedSpace(std::move(bounds), j.at("levels").get<std::vector<int>>());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string run_file_name(const std::string& method, std::size_t repetition) {
  return fmt::format("{}_rep{:02d}.json", method, repetition);
}

void check_config(const CampaignConfig& c, bool known_benchmark) {
  if (c.benchmark.empty()) throw ConfigError("benchmark name is empty");
  if (known_benchmark) {
    const auto names = bench::names();
    if (std::find(names.begin(), names.end(), c.benchmark) == names.end()) {
      throw ConfigError("unknown benchmark '" + c.benchmark + "'");
    }
  }
  if (c.methods.empty()) throw ConfigError("methods list is empty");
  std::set<std::string> seen;
  for (const auto& m : c.methods) {
    const auto& known = known_methods();
    if (std::find(known.begin(), known.end(), m) == known.end()) {
      throw ConfigError("unknown method '" + m + "' (expected HeHS, HoHS, CS, CW or GA)");
    }
    if (!seen.insert(m).second) throw ConfigError("method '" + m + "' listed twice");
  }
  if (c.repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (c.n_initial < 2) throw ConfigError("n_initial must be at least 2");
  if (c.ga_population < 2) throw ConfigError("ga_population must be at least 2");
  if (c.ga_generations < 1) throw ConfigError("ga_generations must be at least 1");
  if (c.jobs < 1) throw ConfigError("jobs must be at least 1");
  if (c.trainer.restarts < 0 || !(c.trainer.initial_step > 0.0) || !(c.trainer.nugget > 0.0)) {
    throw ConfigError("invalid trainer settings");
  }
  try {
    c.infill_ga.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("infill_ga: ") + e.what());
  }
}

fs::path resolve_cache(const fs::path& path) {
  if (fs::exists(path) || path.is_absolute()) return path;
#ifdef MVEGO_DEFAULT_ORACLE_CACHE
  const fs::path fallback = MVEGO_DEFAULT_ORACLE_CACHE;
  if (path == fs::path("data/oracle_cache.jsonl") && fs::exists(fallback)) return fallback;
#endif
  return path;
}

std::optional<std::size_t> benchmark_oracle_category(const CampaignConfig& config, const Problem& problem) {
  const fs::path cache = resolve_cache(config.oracle_cache);
  if (auto cached = bench::find_oracle(cache, config.benchmark)) {
    if (cached->feasible) return cached->category;
    return std::nullopt;
  }
  if (problem.space.continuous_dims() <= 2) {
    spdlog::info("no cached oracle for {}; computing a 400-point grid", config.benchmark);
    const auto oracle = bench::oracle_optimum(problem, 400);
    if (oracle.feasible) return oracle.category;
    return std::nullopt;
  }
  spdlog::warn("no cached oracle for {}; the correct-category column is left empty", config.benchmark);
  return std::nullopt;
}

JobResult run_job(const CampaignConfig& config, const Problem& problem, const std::string& method,
                  std::size_t repetition, const std::vector<MixedPoint>& design) {
  const CountedProblem counted = count_evaluations(problem);
  const std::uint64_t seed = config.base_seed + repetition;
  EgoConfig ego;
  ego.trainer = config.trainer;
  ego.ga = config.infill_ga;

  JobResult job;
  job.method = method;
  job.repetition = repetition;
  if (method == "GA") {
    job.record = run_penalized_ga(counted.problem, config.ga_population, config.ga_generations, seed,
                                  config.infill_ga);
  } else if (method == "CW") {
    job.record = run_categorywise_ego(counted.problem, design, config.n_infill, ego, seed);
  } else {
    job.record = run_mixed_ego(counted.problem, parse_kernel_kind(method), design, config.n_infill, ego, seed);
  }
  job.true_calls = counted.count();
  return job;
}

std::string journal(const std::vector<JobResult>& jobs) {
  std::string out;
  for (const auto& job : jobs) {
    std::size_t index = 0;
    auto line = [&](const EvaluatedSample& s, const char* phase, double incumbent) {
      json j = sample_json(s);
      j["method"] = job.method;
      j["repetition"] = job.repetition;
      j["index"] = index++;
      j["phase"] = phase;
      j["incumbent"] = number(incumbent);
      out += j.dump();
      out += '\n';
    };
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : job.record.initial) {
      if (s.feasible) best = std::min(best, s.objective);
      line(s, "initial", std::isfinite(best) ? best : kNaN);
    }
    for (const auto& it : job.record.iterations) line(it.sample, "infill", it.incumbent);
  }
  return out;
}

void write_outputs(const fs::path& dir, const CampaignConfig& config, const MixedSpace& space,
                   std::optional<std::size_t> oracle_category, const CampaignResult& result) {
  fs::create_directories(dir);
  fs::remove_all(dir / "runs");
  fs::create_directories(dir / "runs");
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("convergence_", 0) == 0 && entry.path().extension() == ".csv") fs::remove(entry.path());
  }

  write_text(dir / "config.json", config.to_json().dump(2) + "\n");
  json meta;
  meta["space"] = space_json(space);
  meta["oracle_category"] = oracle_category ? json(*oracle_category) : json(nullptr);
  write_text(dir / "campaign.json", meta.dump(2) + "\n");

  for (const auto& job : result.jobs) {
    json j = to_json(job.record);
    j["repetition"] = job.repetition;
    j["true_calls"] = job.true_calls;
    write_text(dir / "runs" / run_file_name(job.method, job.repetition), j.dump(1) + "\n");
  }
  write_text(dir / "journal.jsonl", journal(result.jobs));
  write_text(dir / "summary.csv", format_summary_csv(result.summary));

  for (const auto& method : config.methods) {
    std::vector<const RunRecord*> runs;
    for (const auto& job : result.jobs) {
      if (job.method == method) runs.push_back(&job.record);
    }
    write_text(dir / ("convergence_" + method + ".csv"), format_convergence_csv(export_convergence(runs)));
  }
}

CampaignResult execute(const CampaignConfig& config, const Problem& problem,
                       std::optional<std::size_t> oracle_category) {
  struct Task {
    std::string method;
    std::size_t repetition;
  };
  std::vector<std::vector<MixedPoint>> designs(config.repetitions);
  std::vector<Task> tasks;
  for (std::size_t r = 0; r < config.repetitions; ++r) {
    designs[r] = lhs_initial_doe(problem.space, config.n_initial, config.base_seed + r);
    for (const auto& method : config.methods) tasks.push_back({method, r});
  }

  CampaignResult result;
  result.jobs.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        result.jobs[i] = run_job(config, problem, tasks[i].method, tasks[i].repetition,
                                 designs[tasks[i].repetition]);
        const auto& rec = result.jobs[i].record;
        spdlog::info("{} rep {}: best {} after {} evaluations{}", tasks[i].method, tasks[i].repetition,
                     rec.best ? fixed(rec.best->objective) : "none", rec.evaluations,
                     rec.failed ? " (failed: " + rec.message + ")" : "");
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = tasks.size();
      }
    }
  };
  const std::size_t threads = std::min(config.jobs, tasks.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  for (const auto& job : result.jobs) result.any_failed = result.any_failed || job.record.failed;
  result.summary = summarize(result.jobs, config, problem.space, oracle_category);
  write_outputs(config.output_dir, config, problem.space, oracle_category, result);
  return result;
}

}  // namespace

CampaignConfig CampaignConfig::defaults(const std::string& benchmark) {
  CampaignConfig c;
  c.benchmark = benchmark;
  bench::Budget budget;
  try {
    budget = bench::default_budget(benchmark);
  } catch (const DomainError&) {
    throw ConfigError("unknown benchmark '" + benchmark + "'");
  }
  c.n_initial = budget.n_initial;
  c.n_infill = budget.n_infill;
  c.ga_population = budget.ga_population;
  c.ga_generations = budget.ga_generations;
  c.output_dir = fs::path("campaign") / benchmark;
  return c;
}

CampaignConfig CampaignConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("campaign configuration must be a JSON object");
  if (!j.contains("benchmark")) throw ConfigError("campaign configuration needs a 'benchmark' key");
  try {
    reject_unknown(j,
                   {"benchmark", "methods", "n_initial", "n_infill", "ga_population", "ga_generations",
                    "repetitions", "base_seed", "trainer", "infill_ga", "output_dir", "jobs", "oracle_cache"},
                   "campaign configuration");
    CampaignConfig c = defaults(j.at("benchmark").get<std::string>());
    take(j, "methods", c.methods);
    take(j, "n_initial", c.n_initial);
    take(j, "n_infill", c.n_infill);
    take(j, "ga_population", c.ga_population);
    take(j, "ga_generations", c.ga_generations);
    take(j, "repetitions", c.repetitions);
    take(j, "base_seed", c.base_seed);
    take(j, "jobs", c.jobs);
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("oracle_cache")) c.oracle_cache = j.at("oracle_cache").get<std::string>();
    if (j.contains("trainer")) {
      const json& t = j.at("trainer");
      reject_unknown(t, {"population", "max_evaluations", "initial_step", "restarts", "nugget"}, "trainer");
      take(t, "population", c.trainer.population);
      take(t, "max_evaluations", c.trainer.max_evaluations);
      take(t, "initial_step", c.trainer.initial_step);
      take(t, "restarts", c.trainer.restarts);
      take(t, "nugget", c.trainer.nugget);
    }
    if (j.contains("infill_ga")) {
      const json& g = j.at("infill_ga");
      reject_unknown(g,
                     {"population", "generations", "stall_generations", "crossover", "mutation_continuous",
                      "mutation_discrete", "tournament"},
                     "infill_ga");
      take(g, "population", c.infill_ga.population);
      take(g, "generations", c.infill_ga.generations);
      take(g, "stall_generations", c.infill_ga.stall_generations);
      take(g, "crossover", c.infill_ga.crossover);
      take(g, "mutation_continuous", c.infill_ga.mutation_continuous);
      take(g, "mutation_discrete", c.infill_ga.mutation_discrete);
      take(g, "tournament", c.infill_ga.tournament);
    }
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed campaign configuration: ") + e.what());
  }
}

json CampaignConfig::to_json() const {
  json j;
  j["benchmark"] = benchmark;
  j["methods"] = methods;
  j["n_initial"] = n_initial;
  j["n_infill"] = n_infill;
  j["ga_population"] = ga_population;
  j["ga_generations"] = ga_generations;
  j["repetitions"] = repetitions;
  j["base_seed"] = base_seed;
  j["trainer"] = {{"population", trainer.population},
                  {"max_evaluations", trainer.max_evaluations},
                  {"initial_step", trainer.initial_step},
                  {"restarts", trainer.restarts},
                  {"nugget", trainer.nugget}};
  j["infill_ga"] = {{"population", infill_ga.population},
                    {"generations", infill_ga.generations},
                    {"stall_generations", infill_ga.stall_generations},
                    {"crossover", infill_ga.crossover},
                    {"mutation_continuous", infill_ga.mutation_continuous},
                    {"mutation_discrete", infill_ga.mutation_discrete},
                    {"tournament", infill_ga.tournament}};
  j["output_dir"] = output_dir.string();
  j["jobs"] = jobs;
  j["oracle_cache"] = oracle_cache.string();
  return j;
}

void CampaignConfig::validate() const { check_config(*this, true); }

CampaignConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  return CampaignConfig::from_json(j);
}

CampaignResult run_campaign(const CampaignConfig& config) {
  config.validate();
  const Problem problem = bench::make_problem(config.benchmark);
  return execute(config, problem, benchmark_oracle_category(config, problem));
}

CampaignResult run_campaign(const CampaignConfig& config, const Problem& problem,
                            std::optional<std::size_t> oracle_category) {
  check_config(config, false);
  if (!problem.evaluate) throw ConfigError("external problem has no evaluator");
  if (!oracle_category && problem.optimum) oracle_category = problem.optimum->category;
  return execute(config, problem, oracle_category);
}

std::string hyperparameter_label(const std::string& method, const MixedSpace& space) {
  if (method == "GA") return "[-]";
  if (method == "CW") return fmt::format("{}/category", 2 * space.continuous_dims());
  return std::to_string(hyperparameter_count(parse_kernel_kind(method), space));
}

std::vector<SummaryRow> summarize(const std::vector<JobResult>& jobs, const CampaignConfig& config,
                                  const MixedSpace& space, std::optional<std::size_t> oracle_category) {
  std::vector<SummaryRow> rows;
  for (const auto& method : config.methods) {
    SummaryRow row;
    row.method = method;
    row.hyperparameters = hyperparameter_label(method, space);
    std::vector<double> finals;
    std::vector<std::vector<double>> constraints;
    std::size_t correct = 0;
    std::optional<std::size_t> evaluations;
    bool uniform = true;
    for (const auto& job : jobs) {
      if (job.method != method) continue;
      ++row.runs;
      if (!evaluations) evaluations = job.record.evaluations;
      uniform = uniform && *evaluations == job.record.evaluations;
      if (!job.record.best) continue;
      finals.push_back(job.record.best->objective);
      constraints.push_back(job.record.best->constraints);
      if (oracle_category && encode_category(job.record.best->point.z, space) == *oracle_category) ++correct;
    }
    row.evaluations = uniform && evaluations ? *evaluations : 0;
    row.feasible_runs = finals.size();
    if (finals.empty()) {
      row.mean = kNaN;
      row.dispersion = kNaN;
    } else {
      double sum = 0.0;
      for (double f : finals) sum += f;
      row.mean = sum / static_cast<double>(finals.size());
      double ss = 0.0;
      for (double f : finals) ss += (f - row.mean) * (f - row.mean);
      const double sd = finals.size() > 1 ? std::sqrt(ss / static_cast<double>(finals.size() - 1)) : 0.0;
      row.dispersion = sd == 0.0 ? 0.0 : sd / std::abs(row.mean) * 100.0;
    }
    if (is_smbdo(method) && !constraints.empty()) {
      row.mean_constraints.assign(constraints.front().size(), 0.0);
      for (const auto& g : constraints) {
        for (std::size_t i = 0; i < g.size(); ++i) row.mean_constraints[i] += g[i];
      }
      for (double& g : row.mean_constraints) g /= static_cast<double>(constraints.size());
    }
    if (oracle_category) row.correct_category = correct;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SummaryRow> summarize(const fs::path& run_dir) {
  std::ifstream config_in(run_dir / "config.json");
  if (!config_in) throw ConfigError("no config.json in " + run_dir.string());
  std::ifstream meta_in(run_dir / "campaign.json");
  if (!meta_in) throw ConfigError("no campaign.json in " + run_dir.string());
  json config_json;
  json meta;
  try {
    config_json = json::parse(config_in);
    meta = json::parse(meta_in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse campaign files in " + run_dir.string() + ": " + e.what());
  }

  // External problems carry arbitrary labels, so rebuild the config without the name check.
  CampaignConfig config;
  try {
    config.benchmark = config_json.at("benchmark").get<std::string>();
    config.methods = config_json.at("methods").get<std::vector<std::string>>();
    config.repetitions = config_json.at("repetitions").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config.json: ") + e.what());
  }
  const MixedSpace space = space_from_json(meta.at("space"));
  std::optional<std::size_t> oracle_category;
  if (!meta.at("oracle_category").is_null()) oracle_category = meta.at("oracle_category").get<std::size_t>();

  std::vector<JobResult> jobs;
  for (std::size_t r = 0; r < config.repetitions; ++r) {
    for (const auto& method : config.methods) {
      const fs::path file = run_dir / "runs" / run_file_name(method, r);
      std::ifstream in(file);
      if (!in) throw ConfigError("missing run file " + file.string());
      const json j = json::parse(in);
      JobResult job;
      job.method = method;
      job.repetition = r;
      job.record = run_from_json(j);
      job.true_calls = j.value("true_calls", std::size_t{0});
      jobs.push_back(std::move(job));
    }
  }
  auto rows = summarize(jobs, config, space, oracle_category);
  write_text(run_dir / "summary.csv", format_summary_csv(rows));
  return rows;
}

std::vector<ConvergenceRow> export_convergence(const std::vector<const RunRecord*>& runs) {
  if (runs.empty()) throw ConfigError("no runs to aggregate");
  const std::size_t n_initial = runs.front()->initial.size();
  std::optional<std::size_t> n_infill;
  for (const RunRecord* run : runs) {
    if (run->initial.size() != n_initial) {
      throw ConfigError("runs of " + run->method + " use different initial budgets (" +
                        std::to_string(n_initial) + " vs " + std::to_string(run->initial.size()) + ")");
    }
    if (run->failed) continue;
    if (!n_infill) n_infill = run->iterations.size();
    if (*n_infill != run->iterations.size()) {
      throw ConfigError("runs of " + run->method + " use different infill budgets (" +
                        std::to_string(*n_infill) + " vs " + std::to_string(run->iterations.size()) + ")");
    }
  }
  std::size_t length = n_infill.value_or(0);
  for (const RunRecord* run : runs) length = std::max(length, run->iterations.size());

  std::vector<std::vector<double>> trajectories;
  for (const RunRecord* run : runs) trajectories.push_back(run->incumbent_trajectory());

  std::vector<ConvergenceRow> rows;
  for (std::size_t k = 0; k <= length; ++k) {
    ConvergenceRow row;
    row.infill = k;
    row.evaluations = n_initial + k;
    row.min = std::numeric_limits<double>::infinity();
    row.max = -row.min;
    double sum = 0.0;
    for (const auto& t : trajectories) {
      if (k >= t.size() || std::isnan(t[k])) continue;
      sum += t[k];
      row.min = std::min(row.min, t[k]);
      row.max = std::max(row.max, t[k]);
      ++row.count;
    }
    if (row.count == 0) {
      row.mean = row.min = row.max = kNaN;
    } else {
      row.mean = sum / static_cast<double>(row.count);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string format_summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "# dispersion_percent = sample standard deviation / |mean| * 100 of the final best feasible "
         "values\n";
  out << "# mean_constraint is given in the problem's declared sign convention, ';' between constraints\n";
  out << "method,runs,feasible_runs,mean,dispersion_percent,mean_constraint,correct_category,"
         "hyperparameters,evaluations\n";
  for (const auto& r : rows) {
    std::string constraint = "[-]";
    if (!r.mean_constraints.empty()) {
      constraint.clear();
      for (std::size_t i = 0; i < r.mean_constraints.size(); ++i) {
        if (i > 0) constraint += ';';
        constraint += fixed(r.mean_constraints[i]);
      }
    }
    out << r.method << ',' << r.runs << ',' << r.feasible_runs << ',' << fixed(r.mean) << ','
        << fixed(r.dispersion) << ',' << constraint << ','
        << (r.correct_category ? std::to_string(*r.correct_category) : "[-]") << ',' << r.hyperparameters
        << ',' << r.evaluations << '\n';
  }
  return out.str();
}

std::string format_convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream out;
  out << "infill,evaluations,mean,min,max,count\n";
  for (const auto& r : rows) {
    out << r.infill << ',' << r.evaluations << ',' << fixed(r.mean) << ',' << fixed(r.min) << ','
        << fixed(r.max) << ',' << r.count << '\n';
  }
  return out.str();
}

json to_json(const RunRecord& record) {
  json j;
  j["method"] = record.method;
  j["seed"] = record.seed;
  j["doe_hash"] = record.doe_hash;
  j["evaluations"] = record.evaluations;
  j["failed"] = record.failed;
  j["message"] = record.message;
  json initial = json::array();
  for (const auto& s : record.initial) initial.push_back(sample_json(s));
  j["initial"] = initial;
  json iterations = json::array();
  for (const auto& it : record.iterations) {
    json e = sample_json(it.sample);
    e["incumbent"] = number(it.incumbent);
    json h = json::array();
    for (double v : it.hyperparameters) h.push_back(number(v));
    e["hyperparameters"] = h;
    e["infill_value"] = number(it.infill_value);
    iterations.push_back(e);
  }
  j["iterations"] = iterations;
  j["best"] = record.best ? sample_json(*record.best) : json(nullptr);
  return j;
}

RunRecord run_from_json(const json& j) {
  RunRecord r;
  r.method = j.at("method").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.doe_hash = j.at("doe_hash").get<std::string>();
  r.evaluations = j.at("evaluations").get<std::size_t>();
  r.failed = j.at("failed").get<bool>();
  r.message = j.at("message").get<std::string>();
  for (const auto& s : j.at("initial")) r.initial.push_back(sample_from_json(s));
  for (const auto& e : j.at("iterations")) {
    IterationRecord it;
    it.sample = sample_from_json(e);
    it.incumbent = number(e.at("incumbent"));
    for (const auto& h : e.at("hyperparameters")) it.hyperparameters.push_back(number(h));
    it.infill_value = number(e.at("infill_value"));
    r.iterations.push_back(std::move(it));
  }
  if (!j.at("best").is_null()) r.best = sample_from_json(j.at("best"));
  return r;
}

}  // namespace mvego::harness
