#include "mvego/kernels.hpp"

#include <cmath>
#include <numbers>

namespace mvego {
namespace {

inline double powp(double d, double p) {
  if (p == 2.0) return d * d;
  if (p == 1.0) return d;
  return d == 0.0 ? 0.0 : std::pow(d, p);
}

void check_continuous_sizes(const ContinuousKernelParams& params, std::size_t q) {
  if (params.theta.size() != q || params.p.size() != q) {
    throw DomainError("continuous kernel expects " + std::to_string(q) + " theta/p values");
  }
}

}  // namespace

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::HeteroHS: return "HeHS";
    case KernelKind::HomoHS: return "HoHS";
    case KernelKind::CS: return "CS";
  }
  return "?";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "HeHS") return KernelKind::HeteroHS;
  if (name == "HoHS") return KernelKind::HomoHS;
  if (name == "CS") return KernelKind::CS;
  throw DomainError("unknown kernel kind '" + std::string(name) + "'");
}

void ContinuousKernelParams::validate() const {
  if (theta.size() != p.size()) throw DomainError("theta and p sizes differ");
  for (std::size_t k = 0; k < theta.size(); ++k) {
    if (!(theta[k] > 0.0)) throw DomainError("theta must be positive");
    if (!(p[k] >= 1.0 && p[k] <= 2.0)) throw DomainError("p must lie in [1, 2]");
  }
  if (!(sigma_c_sq > 0.0)) throw DomainError("sigma_c^2 must be positive");
}

double continuous_kernel(std::span<const double> xi, std::span<const double> xj,
                         const ContinuousKernelParams& params) {
  check_continuous_sizes(params, xi.size());
  double exponent = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    exponent += params.theta[k] * powp(std::abs(xi[k] - xj[k]), params.p[k]);
  }
  return params.sigma_c_sq * std::exp(-exponent);
}

HypersphereLevels HypersphereLevels::identity(int levels) {
  HypersphereLevels h;
  h.radii.assign(static_cast<std::size_t>(levels), 1.0);
  h.angles.resize(static_cast<std::size_t>(levels));
  for (std::size_t k = 0; k < h.angles.size(); ++k) {
    h.angles[k].assign(k, std::numbers::pi / 2.0);
  }
  return h;
}

Eigen::MatrixXd hypersphere_cholesky(const HypersphereLevels& params) {
  const std::size_t b = params.radii.size();
  if (params.angles.size() != b) throw DomainError("hypersphere needs one angle row per level");
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(b),
                                                static_cast<Eigen::Index>(b));
  for (std::size_t k = 0; k < b; ++k) {
    const double radius = params.radii[k];
    if (!(radius > 0.0)) throw DomainError("hypersphere radius must be positive");
    const auto& angles = params.angles[k];
    if (angles.size() != k) {
      throw DomainError("level " + std::to_string(k) + " needs " + std::to_string(k) + " angles");
    }
    for (double a : angles) {
      if (!(a > 0.0 && a < std::numbers::pi)) throw DomainError("hypersphere angle outside (0, pi)");
    }
    const auto row = static_cast<Eigen::Index>(k);
    double sin_product = radius;
    for (std::size_t s = 0; s < k; ++s) {
      lower(row, static_cast<Eigen::Index>(s)) = sin_product * std::cos(angles[s]);
      sin_product *= std::sin(angles[s]);
    }
    lower(row, row) = sin_product;
  }
  return lower;
}

Eigen::MatrixXd discrete_matrix_hs(const Eigen::MatrixXd& lower) {
  Eigen::MatrixXd t = lower * lower.transpose();
  // exact symmetry regardless of rounding in the product
  return 0.5 * (t + t.transpose());
}

double gower_distance(const MixedPoint& wi, const MixedPoint& wj, const MixedSpace& space) {
  const std::size_t q = space.continuous_dims();
  const std::size_t r = space.discrete_dims();
  if (q + r == 0) return 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < q; ++k) {
    total += std::abs(wi.x[k] - wj.x[k]) / space.bounds()[k].range();
  }
  for (std::size_t k = 0; k < r; ++k) total += wi.z[k] == wj.z[k] ? 0.0 : 1.0;
  return total / static_cast<double>(q + r);
}

double cs_ratio(double theta_s, double p_s, const MixedSpace& space) {
  const double d = 1.0 / static_cast<double>(space.total_dims());
  return std::exp(-theta_s * std::pow(d, p_s));
}

Eigen::MatrixXd cs_matrix(double theta_s, double p_s, const MixedSpace& space, std::size_t dim,
                          double sigma_sq) {
  if (!(theta_s > 0.0)) throw DomainError("CS theta must be positive");
  if (dim >= space.discrete_dims()) throw DomainError("discrete dimension out of range");
  const auto b = static_cast<Eigen::Index>(space.levels()[dim]);
  const double c = sigma_sq * cs_ratio(theta_s, p_s, space);
  Eigen::MatrixXd t = Eigen::MatrixXd::Constant(b, b, c);
  t.diagonal().setConstant(sigma_sq);
  return t;
}

KernelKind KernelSpec::kind() const {
  if (std::holds_alternative<CompoundSymmetryParams>(discrete)) return KernelKind::CS;
  return std::get<HypersphereParams>(discrete).heteroscedastic ? KernelKind::HeteroHS
                                                               : KernelKind::HomoHS;
}

KernelSpec KernelSpec::make_default(KernelKind kind, const MixedSpace& space) {
  KernelSpec spec;
  const std::size_t q = space.continuous_dims();
  spec.continuous.theta.assign(q, 1.0);
  spec.continuous.p.assign(q, 2.0);
  spec.continuous.sigma_c_sq = 1.0;
  if (kind == KernelKind::CS) {
    CompoundSymmetryParams cs;
    cs.theta.assign(space.discrete_dims(), 1.0);
    cs.p.assign(space.discrete_dims(), 2.0);
    spec.discrete = std::move(cs);
  } else {
    HypersphereParams hs;
    hs.heteroscedastic = kind == KernelKind::HeteroHS;
    for (int b : space.levels()) hs.dims.push_back(HypersphereLevels::identity(b));
    spec.discrete = std::move(hs);
  }
  return spec;
}

std::size_t hyperparameter_count(KernelKind kind, const MixedSpace& space) {
  const std::size_t q = space.continuous_dims();
  const std::size_t r = space.discrete_dims();
  std::size_t count = 2 * q;
  switch (kind) {
    case KernelKind::HeteroHS:
      for (int b : space.levels()) count += static_cast<std::size_t>(b * (b + 1) / 2);
      break;
    case KernelKind::HomoHS:
      for (int b : space.levels()) count += static_cast<std::size_t>(b * (b - 1) / 2);
      break;
    case KernelKind::CS:
      count += 2 * r;
      break;
  }
  return count;
}

MixedKernel::MixedKernel(const KernelSpec& spec, const MixedSpace& space) {
  const std::size_t q = space.continuous_dims();
  const std::size_t r = space.discrete_dims();
  check_continuous_sizes(spec.continuous, q);
  theta_ = spec.continuous.theta;
  p_ = spec.continuous.p;
  sigma_sq_ = spec.continuous.sigma_c_sq;

  const bool gower = spec.kind() == KernelKind::CS;
  const double factor = gower ? static_cast<double>(q + r) : 1.0;
  inv_scale_.resize(q);
  for (std::size_t k = 0; k < q; ++k) inv_scale_[k] = 1.0 / (space.bounds()[k].range() * factor);

  if (gower) {
    const auto& cs = std::get<CompoundSymmetryParams>(spec.discrete);
    if (cs.theta.size() != r || cs.p.size() != r) {
      throw DomainError("CS spec expects " + std::to_string(r) + " theta/p values");
    }
    for (std::size_t s = 0; s < r; ++s) matrices_.push_back(cs_matrix(cs.theta[s], cs.p[s], space, s));
  } else {
    const auto& hs = std::get<HypersphereParams>(spec.discrete);
    if (hs.dims.size() != r) throw DomainError("hypersphere spec has wrong dimension count");
    for (std::size_t s = 0; s < r; ++s) {
      if (hs.dims[s].levels() != static_cast<std::size_t>(space.levels()[s])) {
        throw DomainError("hypersphere dimension " + std::to_string(s) + " has wrong level count");
      }
      matrices_.push_back(discrete_matrix_hs(hypersphere_cholesky(hs.dims[s])));
    }
  }
}

double MixedKernel::continuous_exponent(const MixedPoint& wi, const MixedPoint& wj) const {
  double exponent = 0.0;
  for (std::size_t k = 0; k < theta_.size(); ++k) {
    exponent += theta_[k] * powp(std::abs(wi.x[k] - wj.x[k]) * inv_scale_[k], p_[k]);
  }
  return exponent;
}

double MixedKernel::discrete_product(const MixedPoint& wi, const MixedPoint& wj) const {
  double product = 1.0;
  for (std::size_t s = 0; s < matrices_.size(); ++s) product *= matrices_[s](wi.z[s], wj.z[s]);
  return product;
}

double MixedKernel::correlation(const MixedPoint& wi, const MixedPoint& wj) const {
  return std::exp(-continuous_exponent(wi, wj)) * discrete_product(wi, wj);
}

double MixedKernel::operator()(const MixedPoint& wi, const MixedPoint& wj) const {
  return sigma_sq_ * correlation(wi, wj);
}

Eigen::MatrixXd MixedKernel::gram(std::span<const MixedPoint> points) const {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = (*this)(points[i], points[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      k(i, j) = k(j, i) = (*this)(points[i], points[j]);
    }
  }
  return k;
}

Eigen::VectorXd MixedKernel::cross(std::span<const MixedPoint> points, const MixedPoint& w) const {
  Eigen::VectorXd psi(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) psi(static_cast<Eigen::Index>(i)) = (*this)(points[i], w);
  return psi;
}

double mixed_kernel(const MixedPoint& wi, const MixedPoint& wj, const KernelSpec& spec,
                    const MixedSpace& space) {
  return MixedKernel(spec, space)(wi, wj);
}

double gower_kernel(const MixedPoint& wi, const MixedPoint& wj, std::span<const double> theta,
                    std::span<const double> p, double sigma_sq, const MixedSpace& space) {
  const std::size_t q = space.continuous_dims();
  const std::size_t r = space.discrete_dims();
  if (theta.size() != q + r || p.size() != q + r) {
    throw DomainError("Gower kernel expects q + r theta/p values");
  }
  const double denom = static_cast<double>(q + r);
  double exponent = 0.0;
  for (std::size_t k = 0; k < q; ++k) {
    const double term = std::abs(wi.x[k] - wj.x[k]) / space.bounds()[k].range() / denom;
    exponent += theta[k] * std::pow(term, p[k]);
  }
  for (std::size_t k = 0; k < r; ++k) {
    const double score = wi.z[k] == wj.z[k] ? 0.0 : 1.0;
    exponent += theta[q + k] * std::pow(score / denom, p[q + k]);
  }
  return sigma_sq * std::exp(-exponent);
}

}  // namespace mvego
