#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "mvego/search_space.hpp"

namespace mvego {

/// Discrete-kernel parameterizations.
enum class KernelKind {
  HeteroHS,  ///< heteroscedastic dimension-wise hypersphere decomposition
  HomoHS,    ///< homoscedastic dimension-wise hypersphere decomposition
  CS,        ///< Gower-distance compound symmetry
};

std::string_view to_string(KernelKind kind);
/// Accepts "HeHS", "HoHS", "CS" (case-sensitive). Throws DomainError otherwise.
KernelKind parse_kernel_kind(std::string_view name);

/// p-exponential kernel parameters. theta_k > 0, 1 <= p_k <= 2, sigma_c_sq > 0.
struct ContinuousKernelParams {
  std::vector<double> theta;
  std::vector<double> p;
  double sigma_c_sq = 1.0;

  void validate() const;
};

/// sigma_c^2 * exp(-sum_k theta_k |xi_k - xj_k|^p_k)
double continuous_kernel(std::span<const double> xi, std::span<const double> xj,
                         const ContinuousKernelParams& params);

/// Hypersphere coordinates for one discrete dimension of b levels.
/// Level k (0-based) carries a radius and k angles; homoscedastic
/// dimensions keep every radius at 1.
struct HypersphereLevels {
  std::vector<double> radii;
  std::vector<std::vector<double>> angles;

  std::size_t levels() const { return radii.size(); }
  static HypersphereLevels identity(int levels);
};

struct HypersphereParams {
  bool heteroscedastic = false;
  std::vector<HypersphereLevels> dims;
};

/// Per discrete dimension Gower weights (theta_s > 0, 1 <= p_s <= 2).
struct CompoundSymmetryParams {
  std::vector<double> theta;
  std::vector<double> p;
};

/// Lower-triangular factor whose k-th row is a point on a hypersphere of
/// radius radii[k]. Throws DomainError on angles outside (0, pi) or
/// non-positive radii.
Eigen::MatrixXd hypersphere_cholesky(const HypersphereLevels& params);

/// T = L L^T.
Eigen::MatrixXd discrete_matrix_hs(const Eigen::MatrixXd& lower);

/// Gower distance: range-normalized Manhattan terms for continuous
/// coordinates and mismatch scores for discrete ones, averaged over q + r.
double gower_distance(const MixedPoint& wi, const MixedPoint& wj, const MixedSpace& space);

/// Correlation ratio c_s / v_s = exp(-theta_s (1 / (r + q))^p_s) of two
/// distinct levels under the Gower form.
double cs_ratio(double theta_s, double p_s, const MixedSpace& space);

/// Compound-symmetry matrix for discrete dimension `dim`: sigma_sq on the
/// diagonal, sigma_sq * cs_ratio off the diagonal.
Eigen::MatrixXd cs_matrix(double theta_s, double p_s, const MixedSpace& space, std::size_t dim,
                          double sigma_sq = 1.0);

/// Mixed covariance: continuous p-exponential kernel times one discrete
/// matrix per discrete dimension. For HomoHS and CS the shared process
/// variance is `continuous.sigma_c_sq`; HeteroHS fixes it to 1 and carries
/// variance in the hypersphere radii.
struct KernelSpec {
  ContinuousKernelParams continuous;
  std::variant<HypersphereParams, CompoundSymmetryParams> discrete;

  KernelKind kind() const;
  bool homoscedastic() const { return kind() != KernelKind::HeteroHS; }
  double process_variance() const { return continuous.sigma_c_sq; }

  /// Neutral starting point: theta = 1, p = 2, angles pi/2, radii 1.
  static KernelSpec make_default(KernelKind kind, const MixedSpace& space);
};

/// Hyperparameters tuned by likelihood maximization. The shared variance of
/// HomoHS and CS is solved analytically and is not counted.
std::size_t hyperparameter_count(KernelKind kind, const MixedSpace& space);

/// A KernelSpec bound to a space with the discrete matrices precomputed.
class MixedKernel {
 public:
  MixedKernel(const KernelSpec& spec, const MixedSpace& space);

  double operator()(const MixedPoint& wi, const MixedPoint& wj) const;
  /// Same kernel with the shared variance factored out (HomoHS, CS).
  double correlation(const MixedPoint& wi, const MixedPoint& wj) const;

  Eigen::MatrixXd gram(std::span<const MixedPoint> points) const;
  Eigen::VectorXd cross(std::span<const MixedPoint> points, const MixedPoint& w) const;

  const std::vector<Eigen::MatrixXd>& discrete_matrices() const { return matrices_; }
  double variance_scale() const { return sigma_sq_; }

 private:
  double continuous_exponent(const MixedPoint& wi, const MixedPoint& wj) const;
  double discrete_product(const MixedPoint& wi, const MixedPoint& wj) const;

  std::vector<double> inv_scale_;
  std::vector<double> theta_;
  std::vector<double> p_;
  double sigma_sq_ = 1.0;
  std::vector<Eigen::MatrixXd> matrices_;
};

double mixed_kernel(const MixedPoint& wi, const MixedPoint& wj, const KernelSpec& spec,
                    const MixedSpace& space);

/// Gower kernel written directly as
/// sigma^2 exp(-sum_k theta_k (|dx_k| / range_k / (q+r))^p_k
///             - sum_s theta_{q+s} (S_s / (q+r))^p_{q+s}).
/// `theta` and `p` have q + r entries.
double gower_kernel(const MixedPoint& wi, const MixedPoint& wj, std::span<const double> theta,
                    std::span<const double> p, double sigma_sq, const MixedSpace& space);

}  // namespace mvego
