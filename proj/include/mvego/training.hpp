#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "mvego/gp.hpp"
#include "mvego/kernels.hpp"

namespace mvego {

/// Raised when no candidate hyperparameter vector yields a finite likelihood.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CMA-ES settings. Zero population / budget select the defaults
/// 4 + floor(3 ln d) and 200 d.
struct TrainerConfig {
  std::size_t population = 0;
  std::size_t max_evaluations = 0;
  double initial_step = 0.3;
  int restarts = 1;
  std::uint64_t seed = 1;
  double nugget = 1e-8;

  std::size_t resolved_population(std::size_t dim) const;
  std::size_t resolved_budget(std::size_t dim) const;
};

struct EsResult {
  Eigen::VectorXd best;
  double value = 0.0;
  std::size_t evaluations = 0;
};

/// Minimizes `objective` with a (mu/mu_w, lambda) CMA-ES and IPOP restarts.
/// When `lower`/`upper` are given, samples are repaired onto the box before
/// evaluation. The initial mean is evaluated first, so the result is never
/// worse than it. Non-finite values rank last.
EsResult evolution_strategy(const std::function<double(const Eigen::VectorXd&)>& objective,
                            const Eigen::VectorXd& initial_mean, const TrainerConfig& config,
                            std::optional<Eigen::VectorXd> lower = std::nullopt,
                            std::optional<Eigen::VectorXd> upper = std::nullopt);

/// Maps kernel hyperparameters to and from the unit box [0,1]^d.
///
/// Layout: theta_1..theta_q (log10 in [-4, 3]), p_1..p_q ([1, 2]), then per
/// discrete dimension either the hypersphere radii (log10 over
/// [1e-3, 10] * response_scale, heteroscedastic only) and angles
/// ([1e-6, pi - 1e-6]) level by level, or the CS pair theta_s, p_s.
class HyperparameterCodec {
 public:
  HyperparameterCodec(KernelKind kind, const MixedSpace& space, double response_scale = 1.0);

  std::size_t size() const { return size_; }
  KernelKind kind() const { return kind_; }

  /// Coordinates are clipped to [0, 1] first.
  KernelSpec decode(const Eigen::VectorXd& unit) const;
  Eigen::VectorXd encode(const KernelSpec& spec) const;

 private:
  KernelKind kind_;
  MixedSpace space_;
  double log_radius_lo_;
  double log_radius_hi_;
  std::size_t size_;
};

struct TrainingResult {
  KernelSpec spec;  ///< fitted spec in standardized response units
  double log_likelihood = 0.0;
  Eigen::VectorXd unit;  ///< optimum in codec coordinates, usable as warm start
  std::size_t evaluations = 0;
};

/// Maximizes the (profiled) likelihood of standardized responses over the
/// hyperparameters of `kind`. Deterministic given config.seed. `warm_start`
/// seeds the ES mean. Constant responses skip the search and return the
/// default spec. Throws TrainingError when every candidate fails.
TrainingResult train(std::span<const MixedPoint> points, std::span<const double> y,
                     KernelKind kind, const MixedSpace& space, const TrainerConfig& config,
                     const Eigen::VectorXd* warm_start = nullptr);

/// Trains then fits a GaussianProcess with the optimum.
struct TrainedModel {
  GaussianProcess gp;
  TrainingResult training;
};
TrainedModel train_and_fit(std::span<const MixedPoint> points, std::span<const double> y,
                           KernelKind kind, const MixedSpace& space, const TrainerConfig& config,
                           const Eigen::VectorXd* warm_start = nullptr);

}  // namespace mvego
