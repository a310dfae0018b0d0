#include "mvego/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

namespace mvego::bench {
namespace {

using std::numbers::pi;

void require_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(what) + " outside [0, 1]");
}

void require_level(int z, int levels, const char* what) {
  if (z < 0 || z >= levels) throw DomainError(std::string(what) + " outside its level range");
}

// Category-dependent block shared by the plain and augmented Branin.
Value branin_block(double xi, double xj, int z1, int z2) {
  const double h = branin_h(xi, xj);
  const double p = xi * xj;
  if (z1 == 0 && z2 == 0) return {h, p - 0.4};
  if (z1 == 0 && z2 == 1) return {0.4 * h, 1.5 * p - 0.4};
  if (z1 == 1 && z2 == 0) return {-0.75 * h + 3.0, 1.5 * p - 0.2};
  return {-0.5 * h + 1.4, 1.2 * p - 0.3};
}

Problem wrap(std::string name, MixedSpace space, std::function<Value(const MixedPoint&)> f) {
  Problem problem;
  problem.name = std::move(name);
  problem.space = std::move(space);
  problem.n_constraints = 1;
  problem.sense = ConstraintSense::GreaterEqualZero;
  problem.evaluate = [f = std::move(f)](const MixedPoint& w) {
    const Value v = f(w);
    return Evaluation{v.objective, {v.constraint}};
  };
  return problem;
}

double penalized(const Problem& problem, const MixedPoint& w) {
  const Evaluation e = problem.evaluate(w);
  double violation = 0.0;
  for (double g : problem.normalized(e.constraints)) {
    const double v = std::max(0.0, g);
    violation += 1e4 * v + 1e6 * v * v;
  }
  return e.objective + violation;
}

// Evolution strategy in unit coordinates of the continuous box, category fixed.
MixedPoint evolve(const Problem& problem, MixedPoint w, std::uint64_t seed) {
  const auto& bounds = problem.space.bounds();
  const auto q = static_cast<Eigen::Index>(bounds.size());
  Eigen::VectorXd start(q);
  for (Eigen::Index k = 0; k < q; ++k) {
    start(k) = (w.x[static_cast<std::size_t>(k)] - bounds[static_cast<std::size_t>(k)].lower) /
               bounds[static_cast<std::size_t>(k)].range();
  }
  auto to_point = [&](const Eigen::VectorXd& u) {
    for (Eigen::Index k = 0; k < q; ++k) {
      const auto& b = bounds[static_cast<std::size_t>(k)];
      w.x[static_cast<std::size_t>(k)] = std::clamp(b.lower + u(k) * b.range(), b.lower, b.upper);
    }
    return w;
  };
  TrainerConfig config;
  config.seed = seed;
  config.initial_step = 0.2;
  config.restarts = 0;
  config.max_evaluations = 300 * static_cast<std::size_t>(q);
  const auto result = evolution_strategy([&](const Eigen::VectorXd& u) { return penalized(problem, to_point(u)); },
                                         start, config, Eigen::VectorXd::Zero(q), Eigen::VectorXd::Ones(q));
  return to_point(result.best);
}

// Compass search on the penalized objective, category fixed.
MixedPoint pattern_search(const Problem& problem, MixedPoint w) {
  const auto& bounds = problem.space.bounds();
  std::vector<double> step(bounds.size());
  for (std::size_t k = 0; k < bounds.size(); ++k) step[k] = 0.1 * bounds[k].range();
  double value = penalized(problem, w);
  for (int sweep = 0; sweep < 5000; ++sweep) {
    bool improved = false;
    for (std::size_t k = 0; k < bounds.size(); ++k) {
      for (double dir : {1.0, -1.0}) {
        MixedPoint trial = w;
        trial.x[k] = std::clamp(w.x[k] + dir * step[k], bounds[k].lower, bounds[k].upper);
        const double v = penalized(problem, trial);
        if (v < value) {
          value = v;
          w = std::move(trial);
          improved = true;
          break;
        }
      }
    }
    if (!improved) {
      bool converged = true;
      for (std::size_t k = 0; k < bounds.size(); ++k) {
        step[k] *= 0.5;
        if (step[k] > 1e-7 * bounds[k].range()) converged = false;
      }
      if (converged) break;
    }
  }
  return w;
}

}  // namespace

double branin_h(double x1, double x2) {
  const double u = 15.0 * x1 - 5.0;
  const double v = 15.0 * x2;
  const double a = v - 5.0 / (4.0 * pi * pi) * u * u + 5.0 / pi * u - 6.0;
  return ((a * a + 10.0 * (1.0 - 1.0 / (8.0 * pi)) * std::cos(u) + 10.0) - 54.8104) / 51.9496;
}

Value branin_mixed(double x1, double x2, int z1, int z2) {
  require_unit(x1, "x1");
  require_unit(x2, "x2");
  require_level(z1, 2, "z1");
  require_level(z2, 2, "z2");
  return branin_block(x1, x2, z1, z2);
}

Value branin_augmented(std::span<const double> x, int z1, int z2) {
  if (x.size() != 10) throw DomainError("augmented Branin takes 10 continuous variables");
  for (double xi : x) require_unit(xi, "x");
  require_level(z1, 2, "z1");
  require_level(z2, 2, "z2");
  Value total;
  for (std::size_t i = 0; i < 5; ++i) {
    const Value block = branin_block(x[2 * i], x[2 * i + 1], z1, z2);
    total.objective += block.objective;
    total.constraint += block.constraint;
  }
  return total;
}

GoldsteinCategory goldstein_category(int z1, int z2) {
  require_level(z1, 3, "z1");
  require_level(z2, 3, "z2");
  static constexpr double kX3[] = {20.0, 50.0, 80.0};
  static constexpr double kX4[] = {20.0, 50.0, 80.0};
  static constexpr double kC1[] = {2.0, -2.0, 1.0};
  static constexpr double kC2[] = {0.5, -1.0, -2.0};
  return {kX3[z1], kX4[z2], kC1[z1], kC2[z2]};
}

double goldstein_h(double x1, double x2, double x3, double x4) {
  return 53.3108 + 0.184901 * x1 - 5.02914 * x1 * x1 * x1 * 1e-6 +
         7.72522 * x1 * x1 * x1 * x1 * 1e-8 - 0.0870775 * x2 - 0.106959 * x3 +
         7.98772 * x3 * x3 * x3 * 1e-6 + 0.00242482 * x4 + 1.32851 * x4 * x4 * x4 * 1e-6 -
         0.00146393 * x1 * x2 - 0.00301588 * x1 * x3 - 0.00272291 * x1 * x4 +
         0.0017004 * x2 * x3 + 0.0038428 * x2 * x4 - 0.000198969 * x3 * x4 +
         1.86025 * x1 * x2 * x3 * 1e-5 - 1.88719 * x1 * x2 * x4 * 1e-6 +
         2.50923 * x1 * x3 * x4 * 1e-5 - 5.62199 * x2 * x3 * x4 * 1e-5;
}

Value goldstein_mixed(double x1, double x2, int z1, int z2) {
  if (!(x1 >= 0.0 && x1 <= 100.0) || !(x2 >= 0.0 && x2 <= 100.0)) {
    throw DomainError("Goldstein continuous variables lie in [0, 100]");
  }
  const GoldsteinCategory c = goldstein_category(z1, z2);
  const double s = std::sin(x1 / 10.0);
  const double co = std::cos(x2 / 20.0);
  return {goldstein_h(x1, x2, c.x3, c.x4), c.c1 * s * s * s + c.c2 * co * co};
}

std::vector<std::string> names() { return {"branin", "branin_augmented", "goldstein"}; }

Problem make_problem(std::string_view name) {
  if (name == "branin") {
    return wrap("branin", MixedSpace({{0.0, 1.0}, {0.0, 1.0}}, {2, 2}), [](const MixedPoint& w) {
      return branin_mixed(w.x[0], w.x[1], w.z[0], w.z[1]);
    });
  }
  if (name == "branin_augmented") {
    return wrap("branin_augmented", MixedSpace(std::vector<Bounds>(10, Bounds{0.0, 1.0}), {2, 2}),
                [](const MixedPoint& w) { return branin_augmented(w.x, w.z[0], w.z[1]); });
  }
  if (name == "goldstein") {
    return wrap("goldstein", MixedSpace({{0.0, 100.0}, {0.0, 100.0}}, {3, 3}), [](const MixedPoint& w) {
      return goldstein_mixed(w.x[0], w.x[1], w.z[0], w.z[1]);
    });
  }
  throw DomainError("unknown benchmark '" + std::string(name) + "'");
}

Budget default_budget(std::string_view name) {
  if (name == "branin") return {20, 20, 5, 8};
  if (name == "branin_augmented") return {60, 140, 10, 20};
  if (name == "goldstein") return {27, 54, 8, 9};
  throw DomainError("unknown benchmark '" + std::string(name) + "'");
}

OracleResult oracle_optimum(const Problem& problem, std::size_t resolution, std::uint64_t seed) {
  const MixedSpace& space = problem.space;
  const std::size_t q = space.continuous_dims();
  const std::size_t m = category_count(space);
  const auto& bounds = space.bounds();

  OracleResult result;
  result.name = problem.name;
  result.resolution = resolution;
  result.value = std::numeric_limits<double>::infinity();

  auto consider = [&](const MixedPoint& w, std::size_t category) {
    const Evaluation e = problem.evaluate(w);
    if (problem.feasible(e.constraints) && e.objective < result.value) {
      result.value = e.objective;
      result.point = w;
      result.category = category;
      result.feasible = true;
    }
  };

  if (q <= 2) {
    if (resolution < 2 && q > 0) throw DomainError("grid oracle needs a resolution of at least 2");
    const std::size_t per_axis = q == 0 ? 1 : resolution;
    const std::size_t total = q == 2 ? per_axis * per_axis : per_axis;
    for (std::size_t c = 0; c < m; ++c) {
      MixedPoint w{std::vector<double>(q), decode_category(c, space)};
      for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (std::size_t k = 0; k < q; ++k) {
          const std::size_t i = rest % per_axis;
          rest /= per_axis;
          w.x[k] = i + 1 == per_axis ? bounds[k].upper
                                     : bounds[k].lower + bounds[k].range() * static_cast<double>(i) /
                                                             static_cast<double>(per_axis - 1);
        }
        consider(w, c);
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t c = 0; c < m; ++c) {
      for (int start = 0; start < 1000; ++start) {
        MixedPoint w{std::vector<double>(q), decode_category(c, space)};
        for (std::size_t k = 0; k < q; ++k) w.x[k] = bounds[k].lower + unit(rng) * bounds[k].range();
        const std::uint64_t local_seed = seed * 1000003ULL + c * 1000ULL + static_cast<std::uint64_t>(start);
        consider(pattern_search(problem, evolve(problem, std::move(w), local_seed)), c);
      }
    }
  }
  if (!result.feasible) result.value = std::numeric_limits<double>::quiet_NaN();
  return result;
}

std::string to_json_line(const OracleResult& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["resolution"] = r.resolution;
  j["feasible"] = r.feasible;
  j["value"] = r.feasible ? nlohmann::json(r.value) : nlohmann::json(nullptr);
  j["x"] = r.point.x;
  j["z"] = r.point.z;
  j["category"] = r.category;
  return j.dump();
}

OracleResult from_json_line(std::string_view line) {
  const auto j = nlohmann::json::parse(line);
  OracleResult r;
  r.name = j.at("name").get<std::string>();
  r.resolution = j.at("resolution").get<std::size_t>();
  r.feasible = j.at("feasible").get<bool>();
  r.value = j.at("value").is_null() ? std::numeric_limits<double>::quiet_NaN() : j.at("value").get<double>();
  r.point.x = j.at("x").get<std::vector<double>>();
  r.point.z = j.at("z").get<std::vector<int>>();
  r.category = j.at("category").get<std::size_t>();
  return r;
}

std::vector<OracleResult> read_oracle_cache(const std::filesystem::path& path) {
  std::vector<OracleResult> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    out.push_back(from_json_line(line));
  }
  return out;
}

std::optional<OracleResult> find_oracle(const std::filesystem::path& path, std::string_view name) {
  for (auto& r : read_oracle_cache(path)) {
    if (r.name == name) return r;
  }
  return std::nullopt;
}

void write_oracle_cache(const std::filesystem::path& path, const OracleResult& result) {
  std::map<std::string, OracleResult> records;
  if (std::filesystem::exists(path)) {
    for (auto& r : read_oracle_cache(path)) records[r.name] = r;
  }
  records[result.name] = result;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  for (const auto& [name, r] : records) out << to_json_line(r) << '\n';
}

}  // namespace mvego::bench
