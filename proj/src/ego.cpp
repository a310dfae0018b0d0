#include "mvego/ego.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include <spdlog/spdlog.h>

namespace mvego {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Evaluated history shared by the drivers.
class History {
 public:
  History(const Problem& problem, double tolerance) : problem_(problem), tolerance_(tolerance) {}

  EvaluatedSample evaluate(const MixedPoint& w) {
    Evaluation e = problem_.evaluate(w);
    if (e.constraints.size() != problem_.n_constraints) {
      throw DomainError("problem '" + problem_.name + "' returned " +
                        std::to_string(e.constraints.size()) + " constraints, expected " +
                        std::to_string(problem_.n_constraints));
    }
    EvaluatedSample s{w, e.objective, std::move(e.constraints), false};
    s.feasible = problem_.feasible(s.constraints, tolerance_);
    points_.push_back(s.point);
    objective_.push_back(s.objective);
    normalized_.push_back(problem_.normalized(s.constraints));
    if (s.feasible && (!best_ || s.objective < best_->objective)) best_ = s;
    return s;
  }

  double incumbent() const { return best_ ? best_->objective : kNaN; }
  const std::optional<EvaluatedSample>& best() const { return best_; }
  const std::vector<MixedPoint>& points() const { return points_; }
  const std::vector<double>& objective() const { return objective_; }
  const std::vector<std::vector<double>>& normalized() const { return normalized_; }

  std::vector<double> constraint_column(std::size_t i) const {
    std::vector<double> column(normalized_.size());
    for (std::size_t j = 0; j < normalized_.size(); ++j) column[j] = normalized_[j][i];
    return column;
  }

  IncumbentState incumbent_state() const {
    return IncumbentState::from_data(objective_, normalized_, tolerance_);
  }

 private:
  const Problem& problem_;
  double tolerance_;
  std::vector<MixedPoint> points_;
  std::vector<double> objective_;
  std::vector<std::vector<double>> normalized_;
  std::optional<EvaluatedSample> best_;
};

TrainerConfig seeded(TrainerConfig config, std::uint64_t seed) {
  config.seed = seed;
  return config;
}

}  // namespace

std::vector<double> Problem::normalized(std::span<const double> declared) const {
  std::vector<double> g(declared.begin(), declared.end());
  if (sense == ConstraintSense::GreaterEqualZero) {
    for (double& v : g) v = -v;
  }
  return g;
}

bool Problem::feasible(std::span<const double> declared, double tolerance) const {
  for (double g : normalized(declared)) {
    if (!(g <= tolerance)) return false;
  }
  return true;
}

CountedProblem count_evaluations(const Problem& problem) {
  CountedProblem counted{problem, std::make_shared<std::atomic<std::size_t>>(0)};
  counted.problem.evaluate = [inner = problem.evaluate, calls = counted.calls](const MixedPoint& w) {
    calls->fetch_add(1);
    return inner(w);
  };
  return counted;
}

std::vector<double> RunRecord::incumbent_trajectory() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : initial) {
    if (s.feasible) best = std::min(best, s.objective);
  }
  std::vector<double> trajectory;
  trajectory.push_back(std::isfinite(best) ? best : kNaN);
  for (const auto& it : iterations) trajectory.push_back(it.incumbent);
  return trajectory;
}

std::string design_hash(std::span<const MixedPoint> design) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& w : design) {
    for (double x : w.x) mix(std::bit_cast<std::uint64_t>(x));
    for (int z : w.z) mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(z)));
    mix(0xffffffffffffffffULL);
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xfU];
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ (b + 0x51ed27ULL));
  return splitmix64(h ^ (c + 0x2545f491ULL));
}

std::vector<double> flatten_hyperparameters(const KernelSpec& spec) {
  std::vector<double> out(spec.continuous.theta);
  out.insert(out.end(), spec.continuous.p.begin(), spec.continuous.p.end());
  if (const auto* cs = std::get_if<CompoundSymmetryParams>(&spec.discrete)) {
    for (std::size_t s = 0; s < cs->theta.size(); ++s) {
      out.push_back(cs->theta[s]);
      out.push_back(cs->p[s]);
    }
  } else {
    const auto& hs = std::get<HypersphereParams>(spec.discrete);
    for (const auto& dim : hs.dims) {
      for (std::size_t k = 0; k < dim.levels(); ++k) {
        if (hs.heteroscedastic) out.push_back(dim.radii[k]);
        out.insert(out.end(), dim.angles[k].begin(), dim.angles[k].end());
      }
    }
  }
  out.push_back(spec.continuous.sigma_c_sq);
  return out;
}

RunRecord run_mixed_ego(const Problem& problem, KernelKind kind,
                        std::span<const MixedPoint> initial_design, std::size_t n_infill,
                        const EgoConfig& config, std::uint64_t seed) {
  if (initial_design.size() < 2) throw DomainError("mixed EGO needs at least two initial samples");
  RunRecord record;
  record.method = std::string(to_string(kind));
  record.seed = seed;
  record.doe_hash = design_hash(initial_design);

  History history(problem, config.feasibility_tolerance);
  for (const auto& w : initial_design) record.initial.push_back(history.evaluate(w));

  const std::size_t outputs = 1 + problem.n_constraints;
  std::vector<Eigen::VectorXd> warm(outputs);

  for (std::size_t t = 0; t < n_infill; ++t) {
    std::vector<GaussianProcess> models;
    std::vector<double> hyperparameters;
    try {
      for (std::size_t o = 0; o < outputs; ++o) {
        const std::vector<double> y = o == 0 ? history.objective() : history.constraint_column(o - 1);
        const Eigen::VectorXd* start = config.warm_start && warm[o].size() > 0 ? &warm[o] : nullptr;
        auto model = train_and_fit(history.points(), y, kind, problem.space,
                                   seeded(config.trainer, derive_seed(seed, t, o, 0)), start);
        warm[o] = model.training.unit;
        if (o == 0) hyperparameters = flatten_hyperparameters(model.gp.spec());
        models.push_back(std::move(model.gp));
      }
    } catch (const std::runtime_error& e) {
      record.failed = true;
      record.message = e.what();
      spdlog::warn("{} run (seed {}) stopped at iteration {}: {}", record.method, seed, t, e.what());
      break;
    }

    GaConfig ga = config.ga;
    ga.seed = derive_seed(seed, t, 1000, 0);
    const auto choice = maximize_ic(models.front(), std::span(models).subspan(1),
                                    history.incumbent_state(), ga);
    IterationRecord it;
    it.sample = history.evaluate(choice.point);
    it.incumbent = history.incumbent();
    it.hyperparameters = std::move(hyperparameters);
    it.infill_value = choice.value;
    record.iterations.push_back(std::move(it));
  }

  record.best = history.best();
  record.evaluations = history.points().size();
  return record;
}

RunRecord run_mixed_ego(const Problem& problem, KernelKind kind, std::size_t n_initial,
                        std::size_t n_infill, const EgoConfig& config, std::uint64_t seed) {
  const auto design = lhs_initial_doe(problem.space, n_initial, seed);
  return run_mixed_ego(problem, kind, design, n_infill, config, seed);
}

namespace {

/// Surrogates of one category in the category-wise driver.
struct CategoryModels {
  std::vector<MixedPoint> points;  // continuous part only
  std::vector<double> objective;
  std::vector<std::vector<double>> normalized;
  std::vector<GaussianProcess> models;
  std::vector<Eigen::VectorXd> warm;
};

}  // namespace

RunRecord run_categorywise_ego(const Problem& problem, std::span<const MixedPoint> initial_design,
                               std::size_t n_infill, const EgoConfig& config, std::uint64_t seed) {
  const MixedSpace& space = problem.space;
  const std::size_t m = category_count(space);
  const MixedSpace sub(space.bounds(), {});
  const std::size_t outputs = 1 + problem.n_constraints;

  RunRecord record;
  record.method = "CW";
  record.seed = seed;
  record.doe_hash = design_hash(initial_design);

  History history(problem, config.feasibility_tolerance);
  std::vector<CategoryModels> categories(m);
  for (auto& c : categories) c.warm.resize(outputs);

  auto add_to_category = [&](const EvaluatedSample& s) {
    auto& c = categories[encode_category(s.point.z, space)];
    c.points.push_back(MixedPoint{s.point.x, {}});
    c.objective.push_back(s.objective);
    c.normalized.push_back(problem.normalized(s.constraints));
  };
  for (const auto& w : initial_design) {
    record.initial.push_back(history.evaluate(w));
    add_to_category(record.initial.back());
  }
  for (std::size_t c = 0; c < m; ++c) {
    if (categories[c].points.size() < 2) {
      spdlog::warn("category {} has {} initial samples; its surrogate falls back to the data prior",
                   c, categories[c].points.size());
    }
  }

  auto retrain = [&](std::size_t index, std::size_t iteration) {
    auto& c = categories[index];
    c.models.clear();
    if (c.points.size() < 2) return;
    for (std::size_t o = 0; o < outputs; ++o) {
      std::vector<double> y(c.points.size());
      for (std::size_t j = 0; j < y.size(); ++j) y[j] = o == 0 ? c.objective[j] : c.normalized[j][o - 1];
      const Eigen::VectorXd* start = config.warm_start && c.warm[o].size() > 0 ? &c.warm[o] : nullptr;
      auto model = train_and_fit(c.points, y, KernelKind::HomoHS, sub,
                                 seeded(config.trainer, derive_seed(seed, iteration, o, index)), start);
      c.warm[o] = model.training.unit;
      c.models.push_back(std::move(model.gp));
    }
  };

  // prior used by categories without a surrogate: global sample moments
  auto prior = [&](std::size_t o) {
    const std::vector<double> y = o == 0 ? history.objective() : history.constraint_column(o - 1);
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    var /= std::max<double>(static_cast<double>(y.size()) - 1.0, 1.0);
    return Prediction{mean, var};
  };

  std::size_t last_updated = m;  // all categories need training first
  for (std::size_t t = 0; t < n_infill; ++t) {
    try {
      if (last_updated == m) {
        for (std::size_t c = 0; c < m; ++c) retrain(c, t);
      } else {
        retrain(last_updated, t);
      }
    } catch (const std::runtime_error& e) {
      record.failed = true;
      record.message = e.what();
      spdlog::warn("CW run (seed {}) stopped at iteration {}: {}", seed, t, e.what());
      break;
    }

    const IncumbentState incumbent = history.incumbent_state();
    std::optional<InfillChoice> best_choice;
    std::size_t best_category = 0;
    for (std::size_t c = 0; c < m; ++c) {
      const auto& cat = categories[c];
      std::vector<Predictor> predictors;
      for (std::size_t o = 0; o < outputs; ++o) {
        if (cat.models.empty()) {
          predictors.emplace_back([p = prior(o)](const MixedPoint&) { return p; });
        } else {
          predictors.emplace_back([&gp = cat.models[o]](const MixedPoint& w) { return gp.predict(w); });
        }
      }
      GaConfig ga = config.ga;
      ga.seed = derive_seed(seed, t, 1000, c);
      auto choice = maximize_ic(predictors.front(), std::span(predictors).subspan(1), sub, incumbent, ga);
      if (!best_choice || choice.value > best_choice->value) {
        best_choice = std::move(choice);
        best_category = c;
      }
    }

    MixedPoint w{best_choice->point.x, decode_category(best_category, space)};
    IterationRecord it;
    it.sample = history.evaluate(w);
    add_to_category(it.sample);
    it.incumbent = history.incumbent();
    if (!categories[best_category].models.empty()) {
      it.hyperparameters = flatten_hyperparameters(categories[best_category].models.front().spec());
    }
    it.infill_value = best_choice->value;
    record.iterations.push_back(std::move(it));
    last_updated = best_category;
  }

  record.best = history.best();
  record.evaluations = history.points().size();
  return record;
}

RunRecord run_categorywise_ego(const Problem& problem, std::size_t n_initial, std::size_t n_infill,
                               const EgoConfig& config, std::uint64_t seed) {
  const auto design = lhs_initial_doe(problem.space, n_initial, seed);
  return run_categorywise_ego(problem, design, n_infill, config, seed);
}

RunRecord run_penalized_ga(const Problem& problem, std::size_t population, std::size_t generations,
                           std::uint64_t seed, GaConfig base) {
  RunRecord record;
  record.method = "GA";
  record.seed = seed;

  History history(problem, 1e-9);
  const auto design = lhs_initial_doe(problem.space, population, seed);
  record.doe_hash = design_hash(design);

  auto penalty = [&](const std::vector<double>& normalized) {
    double total = 0.0;
    for (double g : normalized) total += std::max(0.0, g) * std::max(0.0, g);
    return total;
  };

  std::vector<double> initial_fitness;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& w : design) {
    record.initial.push_back(history.evaluate(w));
    lo = std::min(lo, record.initial.back().objective);
    hi = std::max(hi, record.initial.back().objective);
  }
  const double rho = 1e3 * (hi > lo ? hi - lo : 1.0);
  for (std::size_t i = 0; i < design.size(); ++i) {
    initial_fitness.push_back(-(history.objective()[i] + rho * penalty(history.normalized()[i])));
  }

  std::size_t calls = 0;
  auto fitness = [&](const MixedPoint& w) {
    if (calls < initial_fitness.size()) return initial_fitness[calls++];
    ++calls;
    IterationRecord it;
    it.sample = history.evaluate(w);
    it.incumbent = history.incumbent();
    it.infill_value = kNaN;
    const double value = -(it.sample.objective + rho * penalty(history.normalized().back()));
    record.iterations.push_back(std::move(it));
    return value;
  };

  GaConfig ga = base;
  ga.population = population;
  ga.generations = generations;
  ga.stall_generations = 0;
  ga.seed = derive_seed(seed, 7);
  genetic_maximize(problem.space, fitness, ga, design);

  record.best = history.best();
  record.evaluations = history.points().size();
  return record;
}

}  // namespace mvego
