#include "mvego/search_space.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include <spdlog/spdlog.h>

namespace mvego {

MixedSpace::MixedSpace(std::vector<Bounds> continuous, std::vector<int> levels)
    : bounds_(std::move(continuous)), levels_(std::move(levels)) {
  for (std::size_t k = 0; k < bounds_.size(); ++k) {
    if (!(bounds_[k].lower < bounds_[k].upper)) {
      throw DomainError("continuous dimension " + std::to_string(k) +
                        " needs lower < upper");
    }
  }
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (levels_[k] < 1) {
      throw DomainError("discrete dimension " + std::to_string(k) + " needs at least one level");
    }
  }
}

bool MixedSpace::contains(const MixedPoint& w) const {
  if (w.x.size() != bounds_.size() || w.z.size() != levels_.size()) return false;
  for (std::size_t k = 0; k < bounds_.size(); ++k) {
    if (!(w.x[k] >= bounds_[k].lower && w.x[k] <= bounds_[k].upper)) return false;
  }
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (w.z[k] < 0 || w.z[k] >= levels_[k]) return false;
  }
  return true;
}

void MixedSpace::check(const MixedPoint& w) const {
  if (w.x.size() != bounds_.size() || w.z.size() != levels_.size()) {
    throw DomainError("point has " + std::to_string(w.x.size()) + "+" +
                      std::to_string(w.z.size()) + " coordinates, space expects " +
                      std::to_string(bounds_.size()) + "+" + std::to_string(levels_.size()));
  }
  for (std::size_t k = 0; k < bounds_.size(); ++k) {
    if (!(w.x[k] >= bounds_[k].lower && w.x[k] <= bounds_[k].upper)) {
      std::ostringstream os;
      os << "x[" << k << "] = " << w.x[k] << " outside [" << bounds_[k].lower << ", "
         << bounds_[k].upper << "]";
      throw DomainError(os.str());
    }
  }
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (w.z[k] < 0 || w.z[k] >= levels_[k]) {
      throw DomainError("z[" + std::to_string(k) + "] = " + std::to_string(w.z[k]) +
                        " outside 0.." + std::to_string(levels_[k] - 1));
    }
  }
}

MixedPoint MixedSpace::clamp(MixedPoint w) const {
  for (std::size_t k = 0; k < bounds_.size(); ++k) {
    w.x[k] = std::clamp(w.x[k], bounds_[k].lower, bounds_[k].upper);
  }
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    w.z[k] = std::clamp(w.z[k], 0, levels_[k] - 1);
  }
  return w;
}

std::size_t category_count(const MixedSpace& space) {
  std::size_t m = 1;
  for (int b : space.levels()) m *= static_cast<std::size_t>(b);
  return m;
}

std::size_t encode_category(const std::vector<int>& z, const MixedSpace& space) {
  const auto& levels = space.levels();
  if (z.size() != levels.size()) {
    throw DomainError("level tuple has " + std::to_string(z.size()) + " entries, expected " +
                      std::to_string(levels.size()));
  }
  std::size_t index = 0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (z[k] < 0 || z[k] >= levels[k]) {
      throw DomainError("level " + std::to_string(z[k]) + " out of range for dimension " +
                        std::to_string(k));
    }
    index = index * static_cast<std::size_t>(levels[k]) + static_cast<std::size_t>(z[k]);
  }
  return index;
}

std::vector<int> decode_category(std::size_t index, const MixedSpace& space) {
  const auto& levels = space.levels();
  if (index >= category_count(space)) {
    throw DomainError("category index " + std::to_string(index) + " out of range");
  }
  std::vector<int> z(levels.size());
  for (std::size_t k = levels.size(); k-- > 0;) {
    const auto b = static_cast<std::size_t>(levels[k]);
    z[k] = static_cast<int>(index % b);
    index /= b;
  }
  return z;
}

std::vector<std::size_t> allocate_categories(std::size_t n_total, std::size_t categories,
                                             std::uint64_t seed) {
  if (categories == 0) throw DomainError("no categories to allocate");
  std::vector<std::size_t> counts(categories, n_total / categories);
  std::vector<std::size_t> order(categories);
  std::iota(order.begin(), order.end(), 0);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x6a09e667u};
  std::mt19937_64 rng(seq);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < n_total % categories; ++i) ++counts[order[i]];
  return counts;
}

std::vector<MixedPoint> lhs_initial_doe(const MixedSpace& space, std::size_t n_total,
                                        std::uint64_t seed) {
  if (n_total < 1) throw DomainError("initial design needs at least one sample");
  const std::size_t q = space.continuous_dims();
  const std::size_t m = category_count(space);
  if (n_total < m) {
    spdlog::warn("initial design of {} samples cannot cover all {} categories", n_total, m);
  }

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0xbb67ae85u};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<MixedPoint> points(n_total);
  std::vector<std::size_t> strata(n_total);
  for (auto& w : points) w.x.resize(q);
  for (std::size_t k = 0; k < q; ++k) {
    std::iota(strata.begin(), strata.end(), 0);
    std::shuffle(strata.begin(), strata.end(), rng);
    const Bounds& b = space.bounds()[k];
    for (std::size_t i = 0; i < n_total; ++i) {
      const double u = (static_cast<double>(strata[i]) + unit(rng)) / static_cast<double>(n_total);
      points[i].x[k] = std::min(b.lower + u * b.range(), b.upper);
    }
  }

  const auto counts = allocate_categories(n_total, m, seed);
  std::vector<std::size_t> labels;
  labels.reserve(n_total);
  for (std::size_t c = 0; c < m; ++c) labels.insert(labels.end(), counts[c], c);
  std::shuffle(labels.begin(), labels.end(), rng);
  for (std::size_t i = 0; i < n_total; ++i) points[i].z = decode_category(labels[i], space);
  return points;
}

void Dataset::add(MixedPoint w, double f, std::vector<double> g) {
  points.push_back(std::move(w));
  objective.push_back(f);
  constraints.push_back(std::move(g));
}

void Dataset::validate(const MixedSpace& space, std::size_t n_constraints) const {
  if (objective.size() != points.size() || constraints.size() != points.size()) {
    throw DomainError("dataset columns have inconsistent lengths");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    space.check(points[i]);
    if (constraints[i].size() != n_constraints) {
      throw DomainError("dataset row " + std::to_string(i) + " has wrong constraint count");
    }
  }
}

}  // namespace mvego
