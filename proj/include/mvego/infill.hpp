#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mvego/gp.hpp"
#include "mvego/search_space.hpp"

namespace mvego {

double normal_pdf(double u);
double normal_cdf(double u);

/// E[max(y_min - Y, 0)] for Y ~ N(mean, variance). Falls back to
/// max(y_min - mean, 0) when the standard deviation is below
/// 1e-12 * max(1, |y_min|).
double expected_improvement(const Prediction& pred, double y_min);

/// Product over constraints (g <= 0 convention) of P(g_i <= 0). A zero
/// standard deviation turns a factor into the indicator of mean <= 0.
double probability_of_feasibility(std::span<const Prediction> constraints);

/// EI * PoF once a feasible incumbent exists; PoF alone before that.
double infill_criterion(double ei, double pof, bool feasible_found = true);

/// Reference minimum for EI: the best objective among feasible rows.
struct IncumbentState {
  double y_min = 0.0;
  bool feasible_found = false;

  /// `constraints` rows follow the g <= 0 convention.
  static IncumbentState from_data(std::span<const double> objective,
                                  std::span<const std::vector<double>> constraints,
                                  double tolerance = 1e-9);
};

struct GaConfig {
  std::size_t population = 50;
  /// Total generations, the initial population counting as the first.
  std::size_t generations = 50;
  /// Stop after this many generations without improvement; 0 disables.
  std::size_t stall_generations = 15;
  double crossover = 0.9;
  double mutation_continuous = 0.2;
  double mutation_discrete = 0.2;
  std::size_t tournament = 3;
  std::uint64_t seed = 1;

  void validate() const;
};

struct GaResult {
  MixedPoint best;
  double fitness = 0.0;
  /// Best fitness after each generation (non-decreasing).
  std::vector<double> history;
  std::size_t evaluations = 0;
};

/// Mixed continuous/discrete GA maximizing `fitness`. Every generation
/// evaluates exactly `population` individuals; the best individual always
/// survives. `seeds` replace the first random individuals of the initial
/// population.
GaResult genetic_maximize(const MixedSpace& space,
                          const std::function<double(const MixedPoint&)>& fitness,
                          const GaConfig& config, std::span<const MixedPoint> seeds = {});

using Predictor = std::function<Prediction(const MixedPoint&)>;

struct InfillChoice {
  MixedPoint point;
  double value = 0.0;
};

/// Maximizes the infill criterion over `space` with the mixed GA.
InfillChoice maximize_ic(const Predictor& objective, std::span<const Predictor> constraints,
                         const MixedSpace& space, const IncumbentState& incumbent,
                         const GaConfig& config);

InfillChoice maximize_ic(const GaussianProcess& objective,
                         std::span<const GaussianProcess> constraints,
                         const IncumbentState& incumbent, const GaConfig& config);

}  // namespace mvego
