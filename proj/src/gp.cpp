#include "mvego/gp.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace mvego {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

Eigen::VectorXd to_vector(std::span<const double> y) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) v(static_cast<Eigen::Index>(i)) = y[i];
  return v;
}

}  // namespace

double Prediction::stddev() const { return std::sqrt(std::max(variance, 0.0)); }

double Factorization::log_determinant() const {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

std::optional<Factorization> factorize(const Eigen::MatrixXd& m, double nugget,
                                       int max_escalations) {
  const double scale = m.rows() > 0 ? std::max(m.diagonal().mean(), 0.0) : 1.0;
  double applied = nugget * (scale > 0.0 ? scale : 1.0);
  for (int attempt = 0; attempt <= max_escalations; ++attempt, applied *= 10.0) {
    Eigen::MatrixXd regularized = m;
    regularized.diagonal().array() += applied;
    Factorization f{Eigen::LLT<Eigen::MatrixXd>(regularized), applied};
    if (f.llt.info() == Eigen::Success && f.llt.matrixLLT().diagonal().minCoeff() > 0.0 &&
        std::isfinite(f.log_determinant())) {
      return f;
    }
  }
  return std::nullopt;
}

double fit_mean(const Eigen::LLT<Eigen::MatrixXd>& k, const Eigen::VectorXd& y) {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(y.size());
  const Eigen::VectorXd kinv_ones = k.solve(ones);
  const double denom = ones.dot(kinv_ones);
  if (!(denom > 0.0) || !std::isfinite(denom)) {
    throw ConditioningError("covariance matrix is singular; increase the nugget");
  }
  return kinv_ones.dot(y) / denom;
}

double analytic_sigma_sq(const Eigen::LLT<Eigen::MatrixXd>& r, const Eigen::VectorXd& y, double mu) {
  const Eigen::VectorXd residual = y.array() - mu;
  const double quad = residual.dot(r.solve(residual));
  return std::max(quad, 0.0) / static_cast<double>(y.size());
}

double log_likelihood(std::span<const MixedPoint> points, const Eigen::VectorXd& y,
                      const KernelSpec& spec, const MixedSpace& space, double nugget) {
  const MixedKernel kernel(spec, space);
  const auto f = factorize(kernel.gram(points), nugget, 4);
  if (!f) return kNegInf;
  double mu = 0.0;
  try {
    mu = fit_mean(f->llt, y);
  } catch (const ConditioningError&) {
    return kNegInf;
  }
  const Eigen::VectorXd residual = y.array() - mu;
  const double quad = residual.dot(f->llt.solve(residual));
  const double n = static_cast<double>(y.size());
  const double value = -0.5 * (quad + f->log_determinant() + n * kLog2Pi);
  return std::isfinite(value) ? value : kNegInf;
}

namespace {

ProfiledLikelihood profile_unchecked(std::span<const MixedPoint> points, const Eigen::VectorXd& y,
                                     const KernelSpec& spec, const MixedSpace& space,
                                     double nugget) {
  if (!spec.homoscedastic()) {
    const MixedKernel kernel(spec, space);
    const auto f = factorize(kernel.gram(points), nugget, 4);
    if (!f) return {kNegInf, 0.0, 1.0};
    const double mu = fit_mean(f->llt, y);
    const Eigen::VectorXd residual = y.array() - mu;
    const double n = static_cast<double>(y.size());
    const double value =
        -0.5 * (residual.dot(f->llt.solve(residual)) + f->log_determinant() + n * kLog2Pi);
    return {std::isfinite(value) ? value : kNegInf, mu, 1.0};
  }

  KernelSpec unit = spec;
  unit.continuous.sigma_c_sq = 1.0;
  const MixedKernel kernel(unit, space);
  const auto f = factorize(kernel.gram(points), nugget, 4);
  if (!f) return {kNegInf, 0.0, 0.0};
  const double mu = fit_mean(f->llt, y);
  const double sigma_sq = analytic_sigma_sq(f->llt, y, mu);
  if (!(sigma_sq > 0.0)) return {kNegInf, mu, 0.0};
  const double n = static_cast<double>(y.size());
  const double value = -0.5 * (n * std::log(sigma_sq) + f->log_determinant() + n + n * kLog2Pi);
  return {std::isfinite(value) ? value : kNegInf, mu, sigma_sq};
}

}  // namespace

ProfiledLikelihood profile_likelihood(std::span<const MixedPoint> points, const Eigen::VectorXd& y,
                                      const KernelSpec& spec, const MixedSpace& space,
                                      double nugget) {
  try {
    return profile_unchecked(points, y, spec, space, nugget);
  } catch (const ConditioningError&) {
    return {kNegInf, 0.0, 0.0};
  }
}

GaussianProcess::GaussianProcess(const MixedSpace& space, std::vector<MixedPoint> points,
                                 KernelSpec spec)
    : space_(space),
      points_(std::move(points)),
      spec_(std::move(spec)),
      kernel_([&] {
        KernelSpec s = spec_;
        if (s.homoscedastic()) s.continuous.sigma_c_sq = 1.0;
        return MixedKernel(s, space_);
      }()),
      homoscedastic_(spec_.homoscedastic()) {}

GaussianProcess GaussianProcess::fit(const MixedSpace& space, std::vector<MixedPoint> points,
                                     std::span<const double> y, KernelSpec spec,
                                     const GpOptions& options) {
  if (points.size() != y.size()) throw DomainError("points and responses differ in length");
  if (points.empty()) throw DomainError("cannot fit a GP to an empty dataset");
  for (const auto& w : points) space.check(w);

  GaussianProcess gp(space, std::move(points), std::move(spec));
  Eigen::VectorXd ys = to_vector(y);
  if (options.standardize) {
    gp.y_offset_ = ys.mean();
    const double n = static_cast<double>(ys.size());
    const double var = (ys.array() - gp.y_offset_).square().sum() / std::max(n - 1.0, 1.0);
    gp.y_scale_ = var > 0.0 ? std::sqrt(var) : 1.0;
    ys = (ys.array() - gp.y_offset_) / gp.y_scale_;
  }

  auto f = factorize(gp.kernel_.gram(gp.points_), options.nugget, options.max_escalations);
  if (!f) {
    throw ConditioningError("covariance factorization failed after nugget escalation; "
                            "increase the nugget");
  }
  gp.factor_ = std::move(*f);
  gp.mu_ = fit_mean(gp.factor_.llt, ys);
  gp.alpha_ = gp.factor_.llt.solve((ys.array() - gp.mu_).matrix());
  if (gp.homoscedastic_) {
    gp.sigma_sq_ = analytic_sigma_sq(gp.factor_.llt, ys, gp.mu_);
    gp.degenerate_ = !(gp.sigma_sq_ > 0.0);
    gp.spec_.continuous.sigma_c_sq = gp.sigma_sq_;
  } else {
    gp.sigma_sq_ = 1.0;
  }
  return gp;
}

double GaussianProcess::nugget() const {
  const double scale = homoscedastic_ ? sigma_sq_ : 1.0;
  return y_scale_ * y_scale_ * scale * factor_.nugget;
}

double GaussianProcess::standardized_variance(const MixedPoint& w) const {
  const Eigen::VectorXd psi = kernel_.cross(points_, w);
  const Eigen::VectorXd v = factor_.llt.matrixL().solve(psi);
  const double prior = kernel_(w, w);
  const double scale = homoscedastic_ ? sigma_sq_ : 1.0;
  return scale * (prior - v.squaredNorm());
}

double GaussianProcess::raw_variance(const MixedPoint& w) const {
  return y_scale_ * y_scale_ * standardized_variance(w);
}

Prediction GaussianProcess::predict(const MixedPoint& w) const {
  const Eigen::VectorXd psi = kernel_.cross(points_, w);
  const double mean_s = mu_ + psi.dot(alpha_);
  const Eigen::VectorXd v = factor_.llt.matrixL().solve(psi);
  const double scale = homoscedastic_ ? sigma_sq_ : 1.0;
  const double var_s = scale * (kernel_(w, w) - v.squaredNorm());
  return {y_offset_ + y_scale_ * mean_s, std::max(0.0, y_scale_ * y_scale_ * var_s)};
}

}  // namespace mvego
