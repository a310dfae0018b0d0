#include "mvego/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include <spdlog/spdlog.h>

namespace mvego {
namespace {

constexpr double kLogThetaLo = -4.0;
constexpr double kLogThetaHi = 3.0;
constexpr double kAngleLo = 1e-6;
constexpr double kAngleHi = std::numbers::pi - 1e-6;

double to_unit(double value, double lo, double hi) { return (value - lo) / (hi - lo); }
double from_unit(double u, double lo, double hi) { return lo + std::clamp(u, 0.0, 1.0) * (hi - lo); }

double finite_or_worst(double v) {
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

std::size_t TrainerConfig::resolved_population(std::size_t dim) const {
  if (population > 0) return std::max<std::size_t>(population, 4);
  const double d = static_cast<double>(std::max<std::size_t>(dim, 1));
  return 4 + static_cast<std::size_t>(std::floor(3.0 * std::log(d)));
}

std::size_t TrainerConfig::resolved_budget(std::size_t dim) const {
  const std::size_t budget = max_evaluations > 0 ? max_evaluations : 200 * std::max<std::size_t>(dim, 1);
  return std::max(budget, resolved_population(dim));
}

EsResult evolution_strategy(const std::function<double(const Eigen::VectorXd&)>& objective,
                            const Eigen::VectorXd& initial_mean, const TrainerConfig& config,
                            std::optional<Eigen::VectorXd> lower,
                            std::optional<Eigen::VectorXd> upper) {
  const Eigen::Index n = initial_mean.size();
  if (n < 1) throw DomainError("evolution strategy needs at least one dimension");
  const double nd = static_cast<double>(n);
  const std::size_t budget = config.resolved_budget(static_cast<std::size_t>(n));
  const bool boxed = lower.has_value() && upper.has_value();

  auto repair = [&](Eigen::VectorXd x) {
    if (boxed) x = x.cwiseMax(*lower).cwiseMin(*upper);
    return x;
  };

  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32), 0x3c6ef372u};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  EsResult result;
  result.best = repair(initial_mean);
  result.value = finite_or_worst(objective(result.best));
  result.evaluations = 1;

  std::size_t lambda = config.resolved_population(static_cast<std::size_t>(n));
  Eigen::VectorXd start = result.best;

  for (int run = 0; run <= config.restarts && result.evaluations < budget; ++run) {
    if (run > 0) {
      lambda *= 2;
      if (boxed) {
        for (Eigen::Index k = 0; k < n; ++k) {
          start(k) = (*lower)(k) + unit(rng) * ((*upper)(k) - (*lower)(k));
        }
      }
    }
    const std::size_t mu = lambda / 2;
    Eigen::VectorXd weights(static_cast<Eigen::Index>(mu));
    for (std::size_t i = 0; i < mu; ++i) {
      weights(static_cast<Eigen::Index>(i)) =
          std::log(static_cast<double>(mu) + 0.5) - std::log(static_cast<double>(i + 1));
    }
    weights /= weights.sum();
    const double mueff = 1.0 / weights.squaredNorm();

    const double cc = (4.0 + mueff / nd) / (nd + 4.0 + 2.0 * mueff / nd);
    const double cs = (mueff + 2.0) / (nd + mueff + 5.0);
    const double c1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + mueff);
    const double cmu =
        std::min(1.0 - c1, 2.0 * (mueff - 2.0 + 1.0 / mueff) / ((nd + 2.0) * (nd + 2.0) + mueff));
    const double damps = 1.0 + 2.0 * std::max(0.0, std::sqrt((mueff - 1.0) / (nd + 1.0)) - 1.0) + cs;
    const double chi_n = std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));

    Eigen::VectorXd mean = start;
    double sigma = config.initial_step;
    Eigen::VectorXd pc = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd ps = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd scales = Eigen::VectorXd::Ones(n);
    Eigen::MatrixXd inv_sqrt = Eigen::MatrixXd::Identity(n, n);

    std::vector<Eigen::VectorXd> xs(lambda);
    std::vector<double> values(lambda);
    std::vector<std::size_t> order(lambda);
    int flat_generations = 0;

    for (int generation = 0; result.evaluations + lambda <= budget; ++generation) {
      for (std::size_t i = 0; i < lambda; ++i) {
        Eigen::VectorXd z(n);
        for (Eigen::Index k = 0; k < n; ++k) z(k) = gauss(rng);
        xs[i] = repair(mean + sigma * (basis * scales.cwiseProduct(z)));
        values[i] = finite_or_worst(objective(xs[i]));
        ++result.evaluations;
        if (values[i] < result.value) {
          result.value = values[i];
          result.best = xs[i];
        }
      }
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

      const Eigen::VectorXd old_mean = mean;
      mean.setZero();
      for (std::size_t i = 0; i < mu; ++i) mean += weights(static_cast<Eigen::Index>(i)) * xs[order[i]];
      const Eigen::VectorXd step = (mean - old_mean) / sigma;

      ps = (1.0 - cs) * ps + std::sqrt(cs * (2.0 - cs) * mueff) * (inv_sqrt * step);
      const double ps_norm = ps.norm();
      const double decay = 1.0 - std::pow(1.0 - cs, 2.0 * (generation + 1));
      const bool hsig = ps_norm / std::sqrt(decay) / chi_n < 1.4 + 2.0 / (nd + 1.0);
      pc = (1.0 - cc) * pc + (hsig ? std::sqrt(cc * (2.0 - cc) * mueff) : 0.0) * step;

      Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
      for (std::size_t i = 0; i < mu; ++i) {
        const Eigen::VectorXd yi = (xs[order[i]] - old_mean) / sigma;
        rank_mu += weights(static_cast<Eigen::Index>(i)) * yi * yi.transpose();
      }
      cov = (1.0 - c1 - cmu) * cov +
            c1 * (pc * pc.transpose() + (hsig ? 0.0 : cc * (2.0 - cc)) * cov) + cmu * rank_mu;
      cov = 0.5 * (cov + cov.transpose());
      sigma *= std::exp((cs / damps) * (ps_norm / chi_n - 1.0));

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
      basis = eig.eigenvectors();
      scales = eig.eigenvalues().cwiseMax(1e-20).cwiseSqrt();
      inv_sqrt = basis * scales.cwiseInverse().asDiagonal() * basis.transpose();

      const double spread = values[order.back()] - values[order.front()];
      flat_generations = spread == 0.0 ? flat_generations + 1 : 0;
      const double max_axis = sigma * scales.maxCoeff();
      if (flat_generations >= 10 || max_axis < 1e-12 || !std::isfinite(sigma) ||
          scales.maxCoeff() > 1e7 * scales.minCoeff()) {
        break;
      }
    }
  }
  return result;
}

HyperparameterCodec::HyperparameterCodec(KernelKind kind, const MixedSpace& space,
                                         double response_scale)
    : kind_(kind),
      space_(space),
      log_radius_lo_(std::log10(1e-3 * response_scale)),
      log_radius_hi_(std::log10(10.0 * response_scale)),
      size_(hyperparameter_count(kind, space)) {}

KernelSpec HyperparameterCodec::decode(const Eigen::VectorXd& unit) const {
  if (static_cast<std::size_t>(unit.size()) != size_) throw DomainError("hyperparameter vector has wrong size");
  KernelSpec spec = KernelSpec::make_default(kind_, space_);
  const std::size_t q = space_.continuous_dims();
  Eigen::Index i = 0;
  for (std::size_t k = 0; k < q; ++k) spec.continuous.theta[k] = std::pow(10.0, from_unit(unit(i++), kLogThetaLo, kLogThetaHi));
  for (std::size_t k = 0; k < q; ++k) spec.continuous.p[k] = from_unit(unit(i++), 1.0, 2.0);
  if (kind_ == KernelKind::CS) {
    auto& cs = std::get<CompoundSymmetryParams>(spec.discrete);
    for (std::size_t s = 0; s < space_.discrete_dims(); ++s) {
      cs.theta[s] = std::pow(10.0, from_unit(unit(i++), kLogThetaLo, kLogThetaHi));
      cs.p[s] = from_unit(unit(i++), 1.0, 2.0);
    }
  } else {
    auto& hs = std::get<HypersphereParams>(spec.discrete);
    for (auto& dim : hs.dims) {
      for (std::size_t k = 0; k < dim.levels(); ++k) {
        if (hs.heteroscedastic) dim.radii[k] = std::pow(10.0, from_unit(unit(i++), log_radius_lo_, log_radius_hi_));
        for (auto& angle : dim.angles[k]) angle = from_unit(unit(i++), kAngleLo, kAngleHi);
      }
    }
  }
  return spec;
}

Eigen::VectorXd HyperparameterCodec::encode(const KernelSpec& spec) const {
  if (spec.kind() != kind_) throw DomainError("spec kind does not match codec");
  Eigen::VectorXd unit(static_cast<Eigen::Index>(size_));
  const std::size_t q = space_.continuous_dims();
  Eigen::Index i = 0;
  for (std::size_t k = 0; k < q; ++k) unit(i++) = to_unit(std::log10(spec.continuous.theta[k]), kLogThetaLo, kLogThetaHi);
  for (std::size_t k = 0; k < q; ++k) unit(i++) = to_unit(spec.continuous.p[k], 1.0, 2.0);
  if (kind_ == KernelKind::CS) {
    const auto& cs = std::get<CompoundSymmetryParams>(spec.discrete);
    for (std::size_t s = 0; s < space_.discrete_dims(); ++s) {
      unit(i++) = to_unit(std::log10(cs.theta[s]), kLogThetaLo, kLogThetaHi);
      unit(i++) = to_unit(cs.p[s], 1.0, 2.0);
    }
  } else {
    const auto& hs = std::get<HypersphereParams>(spec.discrete);
    for (const auto& dim : hs.dims) {
      for (std::size_t k = 0; k < dim.levels(); ++k) {
        if (hs.heteroscedastic) unit(i++) = to_unit(std::log10(dim.radii[k]), log_radius_lo_, log_radius_hi_);
        for (double angle : dim.angles[k]) unit(i++) = to_unit(angle, kAngleLo, kAngleHi);
      }
    }
  }
  return unit;
}

namespace {

Eigen::VectorXd standardized(std::span<const double> y) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) v(static_cast<Eigen::Index>(i)) = y[i];
  const double mean = v.mean();
  const double n = static_cast<double>(v.size());
  const double var = (v.array() - mean).square().sum() / std::max(n - 1.0, 1.0);
  const double scale = var > 0.0 ? std::sqrt(var) : 1.0;
  return (v.array() - mean) / scale;
}

Eigen::VectorXd starting_point(const HyperparameterCodec& codec, const MixedSpace& space) {
  KernelSpec spec = KernelSpec::make_default(codec.kind(), space);
  for (double& p : spec.continuous.p) p = 1.5;
  if (auto* cs = std::get_if<CompoundSymmetryParams>(&spec.discrete)) {
    for (double& p : cs->p) p = 1.5;
  }
  return codec.encode(spec);
}

}  // namespace

TrainingResult train(std::span<const MixedPoint> points, std::span<const double> y,
                     KernelKind kind, const MixedSpace& space, const TrainerConfig& config,
                     const Eigen::VectorXd* warm_start) {
  if (points.size() != y.size()) throw DomainError("points and responses differ in length");
  if (points.size() < 2) throw DomainError("training needs at least two samples");

  const HyperparameterCodec codec(kind, space);
  const Eigen::VectorXd ys = standardized(y);
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());

  TrainingResult result;
  if (*lo == *hi) {
    spdlog::debug("constant responses; {} kernel left at defaults", to_string(kind));
    result.unit = starting_point(codec, space);
    result.spec = codec.decode(result.unit);
    result.log_likelihood = std::numeric_limits<double>::quiet_NaN();
    return result;
  }

  Eigen::VectorXd start = starting_point(codec, space);
  if (warm_start != nullptr && static_cast<std::size_t>(warm_start->size()) == codec.size()) {
    start = warm_start->cwiseMax(0.0).cwiseMin(1.0);
  }

  const std::size_t d = codec.size();
  auto objective = [&](const Eigen::VectorXd& u) {
    return -profile_likelihood(points, ys, codec.decode(u), space, config.nugget).value;
  };
  const EsResult es = evolution_strategy(objective, start, config, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d)),
                                         Eigen::VectorXd::Ones(static_cast<Eigen::Index>(d)));
  if (!std::isfinite(es.value)) {
    throw TrainingError("likelihood training failed for " + std::string(to_string(kind)) +
                        " kernel: no candidate produced a finite likelihood");
  }

  result.unit = es.best;
  result.spec = codec.decode(es.best);
  const auto profiled = profile_likelihood(points, ys, result.spec, space, config.nugget);
  if (result.spec.homoscedastic()) result.spec.continuous.sigma_c_sq = profiled.sigma_sq;
  result.log_likelihood = profiled.value;
  result.evaluations = es.evaluations;
  return result;
}

TrainedModel train_and_fit(std::span<const MixedPoint> points, std::span<const double> y,
                           KernelKind kind, const MixedSpace& space, const TrainerConfig& config,
                           const Eigen::VectorXd* warm_start) {
  TrainingResult training = train(points, y, kind, space, config, warm_start);
  GpOptions options;
  options.nugget = config.nugget;
  GaussianProcess gp = GaussianProcess::fit(space, std::vector<MixedPoint>(points.begin(), points.end()),
                                            y, training.spec, options);
  return {std::move(gp), std::move(training)};
}

}  // namespace mvego
