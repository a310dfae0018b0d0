#pragma once

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mvego/gp.hpp"
#include "mvego/kernels.hpp"
#include "mvego/search_space.hpp"

namespace testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Spaces without continuous dimensions repeat points once n exceeds m.
inline mvego::MixedSpace random_space(Rng& rng, int max_q, int max_r, int max_levels, int min_q = 0) {
  const int q = uniform_int(rng, min_q, max_q);
  const int r = uniform_int(rng, q == 0 ? 1 : 0, max_r);
  std::vector<mvego::Bounds> bounds;
  for (int k = 0; k < q; ++k) {
    const double lo = uniform(rng, -5.0, 5.0);
    bounds.push_back({lo, lo + uniform(rng, 0.5, 10.0)});
  }
  std::vector<int> levels;
  for (int k = 0; k < r; ++k) levels.push_back(uniform_int(rng, 2, max_levels));
  return mvego::MixedSpace(bounds, levels);
}

inline mvego::MixedPoint random_point(Rng& rng, const mvego::MixedSpace& space) {
  mvego::MixedPoint w;
  for (const auto& b : space.bounds()) w.x.push_back(uniform(rng, b.lower, b.upper));
  for (int b : space.levels()) w.z.push_back(uniform_int(rng, 0, b - 1));
  return w;
}

inline std::vector<mvego::MixedPoint> random_points(Rng& rng, const mvego::MixedSpace& space, std::size_t n) {
  std::vector<mvego::MixedPoint> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_point(rng, space));
  return out;
}

/// Random valid parameters; theta in [theta_lo, theta_hi] log-uniformly.
inline mvego::KernelSpec random_spec(Rng& rng, mvego::KernelKind kind, const mvego::MixedSpace& space,
                                     double theta_lo = 1e-2, double theta_hi = 1e2) {
  using std::numbers::pi;
  auto spec = mvego::KernelSpec::make_default(kind, space);
  auto log_theta = [&] { return std::exp(uniform(rng, std::log(theta_lo), std::log(theta_hi))); };
  for (auto& t : spec.continuous.theta) t = log_theta();
  for (auto& p : spec.continuous.p) p = uniform(rng, 1.0, 2.0);
  spec.continuous.sigma_c_sq = kind == mvego::KernelKind::HeteroHS ? 1.0 : uniform(rng, 0.1, 5.0);
  if (auto* cs = std::get_if<mvego::CompoundSymmetryParams>(&spec.discrete)) {
    for (auto& t : cs->theta) t = log_theta();
    for (auto& p : cs->p) p = uniform(rng, 1.0, 2.0);
  } else {
    auto& hs = std::get<mvego::HypersphereParams>(spec.discrete);
    for (auto& dim : hs.dims) {
      for (std::size_t k = 0; k < dim.levels(); ++k) {
        if (hs.heteroscedastic) dim.radii[k] = std::exp(uniform(rng, std::log(0.1), std::log(3.0)));
        for (auto& a : dim.angles[k]) a = uniform(rng, 1e-3, pi - 1e-3);
      }
    }
  }
  return spec;
}

/// Hypersphere factor written out from the row definition: row k is
/// r_k (cos a_1, sin a_1 cos a_2, ..., sin a_1 ... sin a_k).
inline Eigen::MatrixXd reference_hypersphere(const mvego::HypersphereLevels& h) {
  const auto b = static_cast<Eigen::Index>(h.levels());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(b, b);
  for (Eigen::Index k = 0; k < b; ++k) {
    const auto& a = h.angles[static_cast<std::size_t>(k)];
    for (Eigen::Index s = 0; s <= k; ++s) {
      double v = h.radii[static_cast<std::size_t>(k)];
      for (Eigen::Index t = 0; t < s; ++t) v *= std::sin(a[static_cast<std::size_t>(t)]);
      if (s < k) v *= std::cos(a[static_cast<std::size_t>(s)]);
      l(k, s) = v;
    }
  }
  return l;
}

/// Kernel computed from the defining formulas, independent of MixedKernel.
inline double reference_kernel(const mvego::MixedPoint& a, const mvego::MixedPoint& b,
                               const mvego::KernelSpec& spec, const mvego::MixedSpace& space) {
  const std::size_t q = space.continuous_dims();
  const std::size_t r = space.discrete_dims();
  const bool cs = spec.kind() == mvego::KernelKind::CS;
  const double gower = cs ? static_cast<double>(q + r) : 1.0;
  double e = 0.0;
  for (std::size_t k = 0; k < q; ++k) {
    const double d = std::abs(a.x[k] - b.x[k]) / space.bounds()[k].range() / gower;
    e += spec.continuous.theta[k] * std::pow(d, spec.continuous.p[k]);
  }
  double value = spec.continuous.sigma_c_sq * std::exp(-e);
  for (std::size_t s = 0; s < r; ++s) {
    if (cs) {
      const auto& c = std::get<mvego::CompoundSymmetryParams>(spec.discrete);
      if (a.z[s] != b.z[s]) value *= std::exp(-c.theta[s] * std::pow(1.0 / gower, c.p[s]));
    } else {
      const auto& hs = std::get<mvego::HypersphereParams>(spec.discrete);
      const Eigen::MatrixXd l = reference_hypersphere(hs.dims[s]);
      value *= l.row(a.z[s]).dot(l.row(b.z[s]));
    }
  }
  return value;
}

inline Eigen::MatrixXd reference_gram(const std::vector<mvego::MixedPoint>& pts, const mvego::KernelSpec& spec,
                                      const mvego::MixedSpace& space) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      k(i, j) = reference_kernel(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)], spec, space);
    }
  }
  return k;
}

inline const mvego::KernelKind kAllKinds[] = {mvego::KernelKind::HeteroHS, mvego::KernelKind::HomoHS,
                                              mvego::KernelKind::CS};

/// Constant-mean kriging written with an explicit inverse and the reference kernel.
struct DenseReference {
  double offset = 0.0;
  double scale = 1.0;
  double mu = 0.0;
  double sigma_sq = 1.0;
  Eigen::MatrixXd k_inv;
  Eigen::VectorXd y;
  std::vector<mvego::MixedPoint> points;
  mvego::KernelSpec spec;
  mvego::MixedSpace space;

  DenseReference(const mvego::MixedSpace& s, const std::vector<mvego::MixedPoint>& pts, const std::vector<double>& raw,
                 mvego::KernelSpec sp)
      : points(pts), spec(std::move(sp)), space(s) {
    const double n = static_cast<double>(raw.size());
    offset = std::accumulate(raw.begin(), raw.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : raw) ss += (v - offset) * (v - offset);
    scale = std::sqrt(ss / (n - 1.0));
    y = (Eigen::Map<const Eigen::VectorXd>(raw.data(), static_cast<Eigen::Index>(raw.size())).array() - offset) / scale;
    if (spec.homoscedastic()) spec.continuous.sigma_c_sq = 1.0;
    Eigen::MatrixXd k = reference_gram(points, spec, space);
    k.diagonal().array() += 1e-8 * k.diagonal().mean();
    k_inv = k.inverse();
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(y.size());
    mu = ones.dot(k_inv * y) / ones.dot(k_inv * ones);
    if (spec.homoscedastic()) sigma_sq = (y.array() - mu).matrix().dot(k_inv * (y.array() - mu).matrix()) / n;
  }

  mvego::Prediction predict(const mvego::MixedPoint& w) const {
    Eigen::VectorXd psi(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
      psi(static_cast<Eigen::Index>(i)) = reference_kernel(w, points[i], spec, space);
    }
    const double m = mu + psi.dot(k_inv * (y.array() - mu).matrix());
    const double v = sigma_sq * (reference_kernel(w, w, spec, space) - psi.dot(k_inv * psi));
    return {offset + scale * m, scale * scale * v};
  }
};

}  // namespace testing
