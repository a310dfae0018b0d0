#include "mvego/infill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

namespace mvego {

double normal_pdf(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double u) { return 0.5 * std::erfc(-u / std::numbers::sqrt2); }

double expected_improvement(const Prediction& pred, double y_min) {
  const double gap = y_min - pred.mean;
  const double s = pred.stddev();
  if (s < 1e-12 * std::max(1.0, std::abs(y_min))) return std::max(gap, 0.0);
  const double u = gap / s;
  return std::max(gap * normal_cdf(u) + s * normal_pdf(u), 0.0);
}

double probability_of_feasibility(std::span<const Prediction> constraints) {
  double pof = 1.0;
  for (const auto& g : constraints) {
    const double s = g.stddev();
    pof *= s > 0.0 ? normal_cdf(-g.mean / s) : (g.mean <= 0.0 ? 1.0 : 0.0);
  }
  return pof;
}

double infill_criterion(double ei, double pof, bool feasible_found) {
  return feasible_found ? ei * pof : pof;
}

IncumbentState IncumbentState::from_data(std::span<const double> objective,
                                         std::span<const std::vector<double>> constraints,
                                         double tolerance) {
  IncumbentState state;
  state.y_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < objective.size(); ++i) {
    const bool feasible = std::all_of(constraints[i].begin(), constraints[i].end(),
                                      [&](double g) { return g <= tolerance; });
    if (feasible && objective[i] < state.y_min) {
      state.y_min = objective[i];
      state.feasible_found = true;
    }
  }
  if (!state.feasible_found) state.y_min = 0.0;
  return state;
}

void GaConfig::validate() const {
  if (population < 2) throw DomainError("GA population must be at least 2");
  if (generations < 1) throw DomainError("GA needs at least one generation");
  for (double prob : {crossover, mutation_continuous, mutation_discrete}) {
    if (!(prob >= 0.0 && prob <= 1.0)) throw DomainError("GA probabilities must lie in [0, 1]");
  }
  if (tournament < 1) throw DomainError("tournament size must be positive");
}

namespace {

struct Individual {
  MixedPoint genes;
  double fitness = 0.0;
};

double rank_value(double f) { return std::isnan(f) ? -std::numeric_limits<double>::infinity() : f; }

}  // namespace

GaResult genetic_maximize(const MixedSpace& space,
                          const std::function<double(const MixedPoint&)>& fitness,
                          const GaConfig& config, std::span<const MixedPoint> seeds) {
  config.validate();
  const std::size_t q = space.continuous_dims();
  const std::size_t r = space.discrete_dims();
  const auto& bounds = space.bounds();
  const auto& levels = space.levels();

  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32), 0xa54ff53au};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto random_level = [&](std::size_t k) {
    return static_cast<int>(std::uniform_int_distribution<int>(0, levels[k] - 1)(rng));
  };

  GaResult result;
  auto evaluate = [&](Individual& ind) {
    ind.fitness = rank_value(fitness(ind.genes));
    ++result.evaluations;
  };

  std::vector<Individual> population(config.population);
  for (std::size_t i = 0; i < population.size(); ++i) {
    auto& genes = population[i].genes;
    if (i < seeds.size()) {
      genes = space.clamp(seeds[i]);
    } else {
      genes.x.resize(q);
      genes.z.resize(r);
      for (std::size_t k = 0; k < q; ++k) genes.x[k] = bounds[k].lower + unit(rng) * bounds[k].range();
      for (std::size_t k = 0; k < r; ++k) genes.z[k] = levels[k] > 1 ? random_level(k) : 0;
    }
    evaluate(population[i]);
  }

  auto best_of = [](const std::vector<Individual>& pop) {
    return std::max_element(pop.begin(), pop.end(), [](const Individual& a, const Individual& b) {
      return a.fitness < b.fitness;
    });
  };
  Individual best = *best_of(population);
  result.history.push_back(best.fitness);

  auto tournament = [&]() -> const Individual& {
    std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);
    const Individual* winner = &population[pick(rng)];
    for (std::size_t t = 1; t < config.tournament; ++t) {
      const Individual& challenger = population[pick(rng)];
      if (challenger.fitness > winner->fitness) winner = &challenger;
    }
    return *winner;
  };

  std::size_t stall = 0;
  std::vector<Individual> children(config.population);
  for (std::size_t generation = 1; generation < config.generations; ++generation) {
    for (std::size_t i = 0; i < children.size(); i += 2) {
      Individual a = tournament();
      Individual b = tournament();
      if (unit(rng) < config.crossover) {
        for (std::size_t k = 0; k < q; ++k) {
          // blend crossover, alpha = 0.5
          const double lo = std::min(a.genes.x[k], b.genes.x[k]);
          const double hi = std::max(a.genes.x[k], b.genes.x[k]);
          const double ext = 0.5 * (hi - lo);
          const double ua = unit(rng);
          const double ub = unit(rng);
          a.genes.x[k] = std::clamp(lo - ext + ua * (hi - lo + 2.0 * ext), bounds[k].lower, bounds[k].upper);
          b.genes.x[k] = std::clamp(lo - ext + ub * (hi - lo + 2.0 * ext), bounds[k].lower, bounds[k].upper);
        }
        for (std::size_t k = 0; k < r; ++k) {
          if (levels[k] > 1 && unit(rng) < 0.5) std::swap(a.genes.z[k], b.genes.z[k]);
        }
      }
      for (Individual* child : {&a, &b}) {
        for (std::size_t k = 0; k < q; ++k) {
          if (unit(rng) < config.mutation_continuous) {
            child->genes.x[k] = std::clamp(child->genes.x[k] + 0.1 * bounds[k].range() * gauss(rng),
                                           bounds[k].lower, bounds[k].upper);
          }
        }
        for (std::size_t k = 0; k < r; ++k) {
          if (levels[k] > 1 && unit(rng) < config.mutation_discrete) child->genes.z[k] = random_level(k);
        }
      }
      children[i] = std::move(a);
      if (i + 1 < children.size()) children[i + 1] = std::move(b);
    }
    for (auto& child : children) evaluate(child);

    // elitism: previous best plus the best population - 1 children
    std::stable_sort(children.begin(), children.end(),
                     [](const Individual& a, const Individual& b) { return a.fitness > b.fitness; });
    population.front() = best;
    std::copy(children.begin(), children.end() - 1, population.begin() + 1);

    const Individual& generation_best = *best_of(population);
    if (generation_best.fitness > best.fitness) {
      best = generation_best;
      stall = 0;
    } else {
      ++stall;
    }
    result.history.push_back(best.fitness);
    if (config.stall_generations > 0 && stall >= config.stall_generations) break;
  }

  result.best = best.genes;
  result.fitness = best.fitness;
  return result;
}

InfillChoice maximize_ic(const Predictor& objective, std::span<const Predictor> constraints,
                         const MixedSpace& space, const IncumbentState& incumbent,
                         const GaConfig& config) {
  std::vector<Prediction> preds(constraints.size());
  auto ic = [&](const MixedPoint& w) {
    for (std::size_t i = 0; i < constraints.size(); ++i) preds[i] = constraints[i](w);
    const double pof = probability_of_feasibility(preds);
    if (!incumbent.feasible_found) return infill_criterion(0.0, pof, false);
    if (pof == 0.0) return 0.0;
    return infill_criterion(expected_improvement(objective(w), incumbent.y_min), pof, true);
  };
  const GaResult ga = genetic_maximize(space, ic, config);
  return {ga.best, ga.fitness};
}

InfillChoice maximize_ic(const GaussianProcess& objective,
                         std::span<const GaussianProcess> constraints,
                         const IncumbentState& incumbent, const GaConfig& config) {
  const Predictor f = [&](const MixedPoint& w) { return objective.predict(w); };
  std::vector<Predictor> g;
  g.reserve(constraints.size());
  for (const auto& gp : constraints) g.emplace_back([&gp](const MixedPoint& w) { return gp.predict(w); });
  return maximize_ic(f, g, objective.space(), incumbent, config);
}

}  // namespace mvego
