#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "mvego/kernels.hpp"
#include "mvego/search_space.hpp"

namespace mvego {

/// Raised when a covariance matrix cannot be factorized even after nugget
/// escalation.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;

  double stddev() const;
};

struct GpOptions {
  /// Relative diagonal regularization, multiplied by the process variance.
  double nugget = 1e-8;
  /// Each escalation multiplies the nugget by 10.
  int max_escalations = 4;
  /// Center and scale responses before fitting.
  bool standardize = true;
};

/// Cholesky factor of M + nugget * I, with the nugget actually applied.
struct Factorization {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double nugget = 0.0;

  double log_determinant() const;
};

/// Factorizes `m + scale * nugget * I`, with scale the mean diagonal of m,
/// escalating the nugget on failure. Returns nullopt when every attempt fails.
std::optional<Factorization> factorize(const Eigen::MatrixXd& m, double nugget,
                                       int max_escalations);

/// mu = (1^T K^-1 y) / (1^T K^-1 1)
double fit_mean(const Eigen::LLT<Eigen::MatrixXd>& k, const Eigen::VectorXd& y);

/// sigma^2 = (y - 1 mu)^T R^-1 (y - 1 mu) / n
double analytic_sigma_sq(const Eigen::LLT<Eigen::MatrixXd>& r, const Eigen::VectorXd& y, double mu);

/// Gaussian log marginal likelihood with the covariance exactly as given by
/// `spec` (its process variance included) and mu from fit_mean.
/// Returns -inf when the covariance cannot be factorized.
double log_likelihood(std::span<const MixedPoint> points, const Eigen::VectorXd& y,
                      const KernelSpec& spec, const MixedSpace& space, double nugget = 1e-8);

struct ProfiledLikelihood {
  double value = 0.0;
  double mu = 0.0;
  /// Analytic variance for homoscedastic specs, 1 for HeteroHS.
  double sigma_sq = 1.0;
};

/// Likelihood maximized over the shared variance for HomoHS and CS (the
/// variance of `spec` is ignored); plain log_likelihood for HeteroHS.
/// value is -inf on factorization failure or a zero analytic variance.
ProfiledLikelihood profile_likelihood(std::span<const MixedPoint> points, const Eigen::VectorXd& y,
                                      const KernelSpec& spec, const MixedSpace& space,
                                      double nugget = 1e-8);

/// Constant-mean GP regression over a mixed space. Immutable after fit.
class GaussianProcess {
 public:
  /// Throws ConditioningError when factorization fails after escalation.
  static GaussianProcess fit(const MixedSpace& space, std::vector<MixedPoint> points,
                             std::span<const double> y, KernelSpec spec,
                             const GpOptions& options = {});

  Prediction predict(const MixedPoint& w) const;
  /// Predictive variance before clamping at zero.
  double raw_variance(const MixedPoint& w) const;

  /// Constant mean in response units.
  double mean() const { return y_offset_ + y_scale_ * mu_; }
  /// Shared process variance in response units (HeteroHS: 1 scaled).
  double process_variance() const { return y_scale_ * y_scale_ * sigma_sq_; }
  /// Absolute diagonal nugget in response units.
  double nugget() const;
  /// Spec with the fitted variance, in standardized response units.
  const KernelSpec& spec() const { return spec_; }
  const MixedSpace& space() const { return space_; }
  std::span<const MixedPoint> points() const { return points_; }
  /// True when the analytic variance collapsed to zero (constant data).
  bool degenerate() const { return degenerate_; }

 private:
  GaussianProcess(const MixedSpace& space, std::vector<MixedPoint> points, KernelSpec spec);

  double standardized_variance(const MixedPoint& w) const;

  MixedSpace space_;
  std::vector<MixedPoint> points_;
  KernelSpec spec_;
  MixedKernel kernel_;
  Factorization factor_;
  Eigen::VectorXd alpha_;
  double mu_ = 0.0;
  double sigma_sq_ = 1.0;
  bool homoscedastic_ = true;
  bool degenerate_ = false;
  double y_offset_ = 0.0;
  double y_scale_ = 1.0;
};

}  // namespace mvego
