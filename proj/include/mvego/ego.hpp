#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvego/infill.hpp"
#include "mvego/kernels.hpp"
#include "mvego/search_space.hpp"
#include "mvego/training.hpp"

namespace mvego {

/// Which sign of a constraint value means "satisfied".
enum class ConstraintSense { LessEqualZero, GreaterEqualZero };

struct Evaluation {
  double objective = 0.0;
  std::vector<double> constraints;  ///< declared sign convention
};

struct KnownOptimum {
  double value = 0.0;
  MixedPoint point;
  std::size_t category = 0;
};

/// min f(w) s.t. g_i(w) satisfied. One call of `evaluate` is one true
/// function evaluation producing the objective and every constraint.
struct Problem {
  std::string name;
  MixedSpace space;
  std::size_t n_constraints = 0;
  ConstraintSense sense = ConstraintSense::LessEqualZero;
  std::function<Evaluation(const MixedPoint&)> evaluate;
  std::optional<KnownOptimum> optimum;

  /// Constraint values in the g <= 0 convention.
  std::vector<double> normalized(std::span<const double> declared) const;
  bool feasible(std::span<const double> declared, double tolerance = 1e-9) const;
};

/// Wraps a problem so that every true evaluation increments a shared counter.
struct CountedProblem {
  Problem problem;
  std::shared_ptr<std::atomic<std::size_t>> calls;

  std::size_t count() const { return calls->load(); }
};
CountedProblem count_evaluations(const Problem& problem);

struct EvaluatedSample {
  MixedPoint point;
  double objective = 0.0;
  std::vector<double> constraints;  ///< declared sign convention
  bool feasible = false;
};

struct IterationRecord {
  EvaluatedSample sample;
  /// Best feasible objective over all evaluations so far (NaN if none).
  double incumbent = 0.0;
  /// Objective-surrogate hyperparameters in natural units (empty for GA).
  std::vector<double> hyperparameters;
  /// Infill criterion at the chosen point (NaN for GA).
  double infill_value = 0.0;
};

struct RunRecord {
  std::string method;
  std::uint64_t seed = 0;
  std::string doe_hash;
  std::vector<EvaluatedSample> initial;
  std::vector<IterationRecord> iterations;
  std::optional<EvaluatedSample> best;  ///< best feasible evaluation
  std::size_t evaluations = 0;
  bool failed = false;
  std::string message;

  /// Incumbent after the initial design, then after every iteration.
  std::vector<double> incumbent_trajectory() const;
};

struct EgoConfig {
  TrainerConfig trainer;
  GaConfig ga;
  double feasibility_tolerance = 1e-9;
  bool warm_start = true;
};

/// Order-sensitive digest of a design, written as 16 hex digits.
std::string design_hash(std::span<const MixedPoint> design);

/// Deterministic sub-seed for (seed, a, b, c).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

/// Natural-unit hyperparameter values in codec layout.
std::vector<double> flatten_hyperparameters(const KernelSpec& spec);

/// Mixed-variable EGO: one surrogate per output over the whole mixed space,
/// retrained from scratch each iteration, infill at the IC argmax.
RunRecord run_mixed_ego(const Problem& problem, KernelKind kind,
                        std::span<const MixedPoint> initial_design, std::size_t n_infill,
                        const EgoConfig& config, std::uint64_t seed);
RunRecord run_mixed_ego(const Problem& problem, KernelKind kind, std::size_t n_initial,
                        std::size_t n_infill, const EgoConfig& config, std::uint64_t seed);

/// Category-wise EGO: an independent continuous GP per category and output.
/// Each iteration maximizes the IC inside every category with the same GA
/// budget and infills at the best of them.
RunRecord run_categorywise_ego(const Problem& problem, std::span<const MixedPoint> initial_design,
                               std::size_t n_infill, const EgoConfig& config, std::uint64_t seed);
RunRecord run_categorywise_ego(const Problem& problem, std::size_t n_initial, std::size_t n_infill,
                               const EgoConfig& config, std::uint64_t seed);

/// Penalized mixed GA: minimizes f + rho * sum max(0, g_i)^2 with rho fixed
/// to 1e3 times the objective range of the initial population. Spends
/// exactly population * generations evaluations.
RunRecord run_penalized_ga(const Problem& problem, std::size_t population, std::size_t generations,
                           std::uint64_t seed, GaConfig base = {});

}  // namespace mvego
