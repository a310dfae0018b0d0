#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mvego {

/// Raised when an argument lies outside its admissible domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Bounds {
  double lower = 0.0;
  double upper = 1.0;

  double range() const { return upper - lower; }
};

/// A candidate w = {x, z}: continuous coordinates plus 0-based level indices.
struct MixedPoint {
  std::vector<double> x;
  std::vector<int> z;

  friend bool operator==(const MixedPoint&, const MixedPoint&) = default;
};

/// Mixed continuous/discrete domain. Level counts b_k define m = prod(b_k)
/// categories, enumerated in row-major order over (z_1..z_r).
class MixedSpace {
 public:
  MixedSpace() = default;
  MixedSpace(std::vector<Bounds> continuous, std::vector<int> levels);

  std::size_t continuous_dims() const { return bounds_.size(); }
  std::size_t discrete_dims() const { return levels_.size(); }
  std::size_t total_dims() const { return bounds_.size() + levels_.size(); }

  const std::vector<Bounds>& bounds() const { return bounds_; }
  const std::vector<int>& levels() const { return levels_; }

  bool contains(const MixedPoint& w) const;
  /// Throws DomainError with a description of the first violated coordinate.
  void check(const MixedPoint& w) const;

  /// Clamps continuous coordinates into bounds and levels into range.
  MixedPoint clamp(MixedPoint w) const;

 private:
  std::vector<Bounds> bounds_;
  std::vector<int> levels_;
};

std::size_t category_count(const MixedSpace& space);

std::size_t encode_category(const std::vector<int>& z, const MixedSpace& space);
std::vector<int> decode_category(std::size_t index, const MixedSpace& space);

/// Number of samples per category when n_total samples are spread as evenly
/// as possible; the n_total mod m categories receiving an extra sample are
/// drawn uniformly at random.
std::vector<std::size_t> allocate_categories(std::size_t n_total, std::size_t categories,
                                             std::uint64_t seed);

/// Stochastic Latin hypercube over the continuous box combined with an even
/// random assignment of samples to categories. Both parts derive from `seed`.
std::vector<MixedPoint> lhs_initial_doe(const MixedSpace& space, std::size_t n_total,
                                        std::uint64_t seed);

/// Evaluated samples. Constraint rows follow the owning problem's convention.
struct Dataset {
  std::vector<MixedPoint> points;
  std::vector<double> objective;
  std::vector<std::vector<double>> constraints;

  std::size_t size() const { return points.size(); }
  void add(MixedPoint w, double f, std::vector<double> g);
  /// Checks row validity against `space` and consistent lengths.
  void validate(const MixedSpace& space, std::size_t n_constraints) const;
};

}  // namespace mvego
