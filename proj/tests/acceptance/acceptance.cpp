// Acceptance checks. `acceptance N` runs criterion N; no argument runs all.
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>
#include <spdlog/spdlog.h>
#include <Eigen/Eigenvalues>

#include "../unit/helpers.hpp"
#include "mvego/benchmarks.hpp"
#include "mvego/gp.hpp"
#include "mvego/harness.hpp"
#include "mvego/infill.hpp"
#include "mvego/training.hpp"

using namespace mvego;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

fs::path workdir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "mvego_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

harness::CampaignConfig campaign(const std::string& benchmark, const fs::path& dir) {
  auto c = harness::CampaignConfig::defaults(benchmark);
  c.output_dir = dir;
  c.oracle_cache = fs::path(MVEGO_SOURCE_DIR) / "data/oracle_cache.jsonl";
  return c;
}

const harness::SummaryRow& row(const harness::CampaignResult& r, const std::string& method) {
  for (const auto& s : r.summary) {
    if (s.method == method) return s;
  }
  throw std::runtime_error("no summary row for " + method);
}

Outcome hyperparameter_counts() {
  struct Case {
    std::string name;
    MixedSpace space;
    std::size_t hehs, hohs, cs;
  };
  const std::vector<Case> cases{
      {"branin", MixedSpace({{-5, 10}, {0, 15}}, {2, 2}), 10, 6, 8},
      {"augmented branin", MixedSpace(std::vector<Bounds>(10, Bounds{0, 1}), {2, 2}), 26, 22, 24},
      {"goldstein", MixedSpace({{0, 100}, {0, 100}}, {3, 3}), 16, 10, 8},
      {"rocket", MixedSpace(std::vector<Bounds>(4, Bounds{0, 1}), {4, 2, 3}), 27, 18, 14},
  };
  std::size_t matched = 0;
  std::string detail;
  for (const auto& c : cases) {
    const std::size_t got[] = {hyperparameter_count(KernelKind::HeteroHS, c.space),
                               hyperparameter_count(KernelKind::HomoHS, c.space),
                               hyperparameter_count(KernelKind::CS, c.space)};
    const std::size_t want[] = {c.hehs, c.hohs, c.cs};
    for (int k = 0; k < 3; ++k) matched += got[k] == want[k];
    detail += fmt::format("{} {}/{}/{}; ", c.name, got[0], got[1], got[2]);
  }
  return {matched == 12, fmt::format("{}/12 counts match ({})", matched, detail)};
}

Outcome branin_campaign() {
  const auto config = campaign("branin", workdir("branin"));
  const auto result = harness::run_campaign(config);
  std::map<std::string, std::size_t> good;
  for (const auto& job : result.jobs) {
    if (job.record.best && job.record.best->objective <= -0.70) ++good[job.method];
  }
  bool pass = true;
  std::string detail;
  for (const std::string m : {"CS", "HoHS"}) {
    const auto& s = row(result, m);
    const std::size_t cat = s.correct_category.value_or(0);
    pass = pass && good[m] >= 8 && cat >= 8;
    detail += fmt::format("{}: {}/10 <= -0.70, category {}/10; ", m, good[m], cat);
  }
  const double cw = row(result, "CW").mean;
  const double ga = row(result, "GA").mean;
  for (const std::string m : {"HeHS", "HoHS", "CS"}) {
    pass = pass && row(result, m).mean < cw;
    detail += fmt::format("{} mean {:.6f}; ", m, row(result, m).mean);
  }
  pass = pass && cw < ga;
  detail += fmt::format("CW mean {:.6f}; GA mean {:.6f}", cw, ga);
  return {pass, detail};
}

Outcome goldstein_campaign() {
  auto config = campaign("goldstein", workdir("goldstein"));
  config.methods = {"CS", "CW"};
  const auto result = harness::run_campaign(config);
  const double cs = row(result, "CS").mean;
  const double cw = row(result, "CW").mean;
  const bool pass = cs >= 38.0 && cs <= 40.5 && cs < cw && row(result, "CS").feasible_runs == 10;
  return {pass, fmt::format("CS mean {:.6f} (dispersion {:.4f}%), CW mean {:.6f}", cs,
                            row(result, "CS").dispersion, cw)};
}

Outcome kernel_validity() {
  testing::Rng rng(2024);
  std::size_t failures = 0;
  double worst = 0.0;
  for (auto kind : testing::kAllKinds) {
    for (int draw = 0; draw < 1000; ++draw) {
      const auto space = testing::random_space(rng, 5, 3, 5);
      const auto spec = testing::random_spec(rng, kind, space);
      const auto n = static_cast<std::size_t>(testing::uniform_int(rng, 1, 40));
      const auto pts = testing::random_points(rng, space, n);
      const Eigen::MatrixXd k = MixedKernel(spec, space).gram(pts);
      const bool symmetric = (k - k.transpose()).cwiseAbs().maxCoeff() == 0.0;
      const double floor = -1e-8 * k.trace() / static_cast<double>(n);
      const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k, Eigen::EigenvaluesOnly)
                                 .eigenvalues()
                                 .minCoeff();
      worst = std::min(worst, min_eig / (k.trace() / static_cast<double>(n)));
      if (!symmetric || min_eig < floor) ++failures;
    }
  }
  return {failures == 0, fmt::format("{} failing Gram matrices over 3000 draws, worst min-eigenvalue/(trace/n) {:.3g}",
                                     failures, worst)};
}

Outcome gp_oracle() {
  testing::Rng rng(77);
  std::size_t failures = 0;
  double worst = 0.0;
  auto rel = [&](double a, double b, double scale) {
    const double e = std::abs(a - b) / scale;
    worst = std::max(worst, e);
    return e <= 1e-8;
  };
  for (int trial = 0; trial < 100; ++trial) {
    const auto space = testing::random_space(rng, 3, 2, 3, 1);
    const auto kind = testing::kAllKinds[trial % 3];
    const auto spec = testing::random_spec(rng, kind, space, 1.0, 30.0);
    const auto n = static_cast<std::size_t>(testing::uniform_int(rng, 5, 15));
    const auto pts = testing::random_points(rng, space, n);
    std::vector<double> y(n);
    for (auto& v : y) v = testing::uniform(rng, -10.0, 10.0);

    const auto gp = GaussianProcess::fit(space, pts, y, spec);
    const testing::DenseReference ref(space, pts, y, spec);
    bool ok = rel(gp.mean(), ref.offset + ref.scale * ref.mu, std::max(1.0, std::abs(gp.mean())));
    for (int j = 0; j < 10; ++j) {
      const auto w = testing::random_point(rng, space);
      const auto a = gp.predict(w);
      const auto b = ref.predict(w);
      ok = rel(a.mean, b.mean, std::max(1.0, std::abs(b.mean))) && ok;
      ok = rel(a.variance, std::max(b.variance, 0.0), gp.process_variance()) && ok;
    }

    Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(n));
    Eigen::MatrixXd k = testing::reference_gram(pts, spec, space);
    k.diagonal().array() += 1e-8 * k.diagonal().mean();
    const Eigen::MatrixXd inv = k.inverse();
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
    const double mu = ones.dot(inv * yv) / ones.dot(inv * ones);
    const Eigen::VectorXd r = yv.array() - mu;
    const double expected = -0.5 * (r.dot(inv * r) + std::log(k.determinant()) +
                                    static_cast<double>(n) * std::log(2.0 * std::numbers::pi));
    ok = rel(log_likelihood(pts, yv, spec, space), expected, std::max(1.0, std::abs(expected))) && ok;
    failures += !ok;
  }
  const double gp_worst = worst;

  std::size_t gower_failures = 0;
  double gower_worst = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    const auto space = testing::random_space(rng, 5, 3, 5);
    const auto spec = testing::random_spec(rng, KernelKind::CS, space);
    const auto& cs = std::get<CompoundSymmetryParams>(spec.discrete);
    std::vector<double> theta(spec.continuous.theta);
    std::vector<double> p(spec.continuous.p);
    theta.insert(theta.end(), cs.theta.begin(), cs.theta.end());
    p.insert(p.end(), cs.p.begin(), cs.p.end());
    const auto a = testing::random_point(rng, space);
    const auto b = testing::random_point(rng, space);
    const double direct = gower_kernel(a, b, theta, p, spec.continuous.sigma_c_sq, space);
    const double product = mixed_kernel(a, b, spec, space);
    const double e = std::abs(direct - product) / std::max(std::abs(direct), 1e-300);
    gower_worst = std::max(gower_worst, e);
    gower_failures += e > 1e-12;
  }
  return {failures == 0 && gower_failures == 0,
          fmt::format("{}/100 GP instances off (worst relative error {:.2g}); {}/1000 Gower pairs off (worst {:.2g})",
                      failures, gp_worst, gower_failures, gower_worst)};
}

Outcome ei_pof_oracle() {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss;
  const int draws = 1000000;
  std::size_t ei_failures = 0;
  std::size_t pof_failures = 0;
  double worst_ei = 0.0;
  double worst_pof = 0.0;
  for (int t = 0; t < 20; ++t) {
    const double mean = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    const double sd = std::uniform_real_distribution<double>(0.05, 3.0)(rng);
    const double y_min = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double gain = std::max(y_min - (mean + sd * gauss(rng)), 0.0);
      sum += gain;
      sum_sq += gain * gain;
    }
    const double mc = sum / draws;
    const double se = std::sqrt(std::max(sum_sq / draws - mc * mc, 0.0) / draws);
    // no improving draw leaves a zero standard error; EI is then below any resolvable level
    const double diff = std::abs(expected_improvement({mean, sd * sd}, y_min) - mc);
    if (se > 0.0) worst_ei = std::max(worst_ei, diff / se);
    ei_failures += diff > 3.0 * se + 1e-12;

    const int m = 1 + t % 3;
    std::vector<Prediction> g;
    for (int k = 0; k < m; ++k) {
      const double s = std::uniform_real_distribution<double>(0.1, 2.0)(rng);
      g.push_back({std::uniform_real_distribution<double>(-1.5, 1.0)(rng), s * s});
    }
    std::size_t hits = 0;
    for (int i = 0; i < draws; ++i) {
      bool ok = true;
      for (const auto& c : g) ok = (c.mean + c.stddev() * gauss(rng) <= 0.0) && ok;
      hits += ok;
    }
    const double freq = static_cast<double>(hits) / draws;
    const double pof_se = std::sqrt(std::max(freq * (1.0 - freq), 1e-12) / draws);
    const double zp = std::abs(probability_of_feasibility(g) - freq) / pof_se;
    worst_pof = std::max(worst_pof, zp);
    pof_failures += zp > 3.0;
  }
  return {ei_failures == 0 && pof_failures == 0,
          fmt::format("EI off in {}/20 triples (worst {:.2f} SE), PoF off in {}/20 (worst {:.2f} SE)",
                      ei_failures, worst_ei, pof_failures, worst_pof)};
}

Outcome interpolation() {
  std::size_t checked = 0;
  std::size_t failures = 0;
  double worst_mean = 0.0;
  double worst_var = 0.0;
  auto check = [&](const GaussianProcess& gp, const std::vector<MixedPoint>& pts, const std::vector<double>& y) {
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    const double range = *hi - *lo;
    bool ok = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto p = gp.predict(pts[i]);
      const double em = std::abs(p.mean - y[i]) / range;
      const double ev = p.variance / gp.nugget();
      worst_mean = std::max(worst_mean, em);
      worst_var = std::max(worst_var, ev);
      ok = ok && em <= 1e-4 && ev <= 10.0;
    }
    ++checked;
    failures += !ok;
  };

  TrainerConfig trainer;
  for (const std::string name : {"branin", "goldstein"}) {
    const auto problem = bench::make_problem(name);
    const auto budget = bench::default_budget(name);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto pts = lhs_initial_doe(problem.space, budget.n_initial, seed);
      std::vector<double> y;
      for (const auto& w : pts) y.push_back(problem.evaluate(w).objective);
      for (auto kind : testing::kAllKinds) {
        trainer.seed = seed;
        const auto model = train_and_fit(pts, y, kind, problem.space, trainer);
        check(model.gp, pts, y);
      }
    }
  }

  testing::Rng rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const auto space = testing::random_space(rng, 4, 3, 4, 1);
    const auto kind = testing::kAllKinds[trial % 3];
    const auto spec = testing::random_spec(rng, kind, space, 1.0, 100.0);
    const auto pts = testing::random_points(rng, space, static_cast<std::size_t>(testing::uniform_int(rng, 3, 20)));
    std::vector<double> y;
    for (std::size_t i = 0; i < pts.size(); ++i) y.push_back(testing::uniform(rng, -5.0, 5.0));
    check(GaussianProcess::fit(space, pts, y, spec), pts, y);
  }
  return {failures == 0, fmt::format("{}/{} surrogates off; worst |mean error|/range {:.2g}, worst variance/nugget {:.2g}",
                                     failures, checked, worst_mean, worst_var)};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome reproducibility() {
  const auto root = workdir("repro");
  auto config = campaign("branin", root / "a");
  config.repetitions = 3;
  config.n_infill = 6;
  harness::run_campaign(config);
  config.output_dir = root / "b";
  harness::run_campaign(config);
  std::size_t files = 0;
  std::size_t differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), root / "a");
    ++files;
    std::string a = read_file(entry.path());
    std::string b = read_file(root / "b" / rel);
    if (rel == "config.json") {
      // the output directory itself is part of the config
      const auto strip = [](std::string s, const std::string& dir) {
        for (auto pos = s.find(dir); pos != std::string::npos; pos = s.find(dir)) s.erase(pos, dir.size());
        return s;
      };
      a = strip(a, (root / "a").string());
      b = strip(b, (root / "b").string());
    }
    differing += a != b;
  }
  std::size_t files_b = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "b")) files_b += entry.is_regular_file();
  return {files > 0 && differing == 0 && files == files_b,
          fmt::format("{} files compared, {} differ", files, differing)};
}

Outcome budget_audit() {
  std::size_t runs = 0;
  std::size_t mismatches = 0;
  std::string detail;
  for (const auto& name : bench::names()) {
    auto config = campaign(name, workdir("audit_" + name));
    config.repetitions = 1;
    config.trainer.max_evaluations = 40;
    config.infill_ga.population = 12;
    config.infill_ga.generations = 6;
    const auto result = harness::run_campaign(config);
    for (const auto& job : result.jobs) {
      const std::size_t declared =
          job.method == "GA" ? config.ga_population * config.ga_generations : config.n_initial + config.n_infill;
      ++runs;
      if (job.true_calls != declared || job.record.evaluations != declared) {
        ++mismatches;
        detail += fmt::format(" {} {}: {} calls vs {};", name, job.method, job.true_calls, declared);
      }
    }
  }
  return {mismatches == 0 && runs > 0, fmt::format("{} runs audited, {} mismatches.{}", runs, mismatches, detail)};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>> list{
      {"hyperparameter counts", hyperparameter_counts},
      {"Branin campaign", branin_campaign},
      {"Goldstein campaign", goldstein_campaign},
      {"kernel validity", kernel_validity},
      {"GP oracle equivalence", gp_oracle},
      {"EI/PoF oracles", ei_pof_oracle},
      {"interpolation", interpolation},
      {"reproducibility", reproducibility},
      {"budget audit", budget_audit},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::warn);
  std::vector<std::size_t> selected;
  if (argc > 1) {
    for (int i = 1; i < argc; ++i) {
      const int n = std::atoi(argv[i]);
      if (n < 1 || n > static_cast<int>(criteria().size())) {
        std::cerr << "usage: acceptance [1-9 ...]\n";
        return 2;
      }
      selected.push_back(static_cast<std::size_t>(n));
    }
  } else {
    for (std::size_t n = 1; n <= criteria().size(); ++n) selected.push_back(n);
  }
  bool all = true;
  for (std::size_t n : selected) {
    const auto& [name, run] = criteria()[n - 1];
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << n << " (" << name << "): " << out.detail
              << std::endl;
    all = all && out.pass;
  }
  return all ? 0 : 1;
}
