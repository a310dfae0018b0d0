#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mvego/ego.hpp"

namespace mvego::bench {

/// Objective and single constraint of a benchmark; the constraint is
/// satisfied when g >= 0.
struct Value {
  double objective = 0.0;
  double constraint = 0.0;
};

/// Rescaled Branin on [0, 1]^2.
double branin_h(double x1, double x2);
/// Four-category Branin with a product constraint per category.
Value branin_mixed(double x1, double x2, int z1, int z2);
/// Sum of five Branin blocks over consecutive coordinate pairs of x (size 10).
Value branin_augmented(std::span<const double> x, int z1, int z2);

struct GoldsteinCategory {
  double x3 = 0.0;
  double x4 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};
GoldsteinCategory goldstein_category(int z1, int z2);
double goldstein_h(double x1, double x2, double x3, double x4);
/// Nine-category Goldstein on [0, 100]^2.
Value goldstein_mixed(double x1, double x2, int z1, int z2);

/// Default budgets for a benchmark campaign.
struct Budget {
  std::size_t n_initial = 0;
  std::size_t n_infill = 0;
  std::size_t ga_population = 0;
  std::size_t ga_generations = 0;
};

std::vector<std::string> names();
/// Throws DomainError for unknown names.
Problem make_problem(std::string_view name);
Budget default_budget(std::string_view name);

struct OracleResult {
  std::string name;
  std::size_t resolution = 0;
  bool feasible = false;
  double value = 0.0;
  MixedPoint point;
  std::size_t category = 0;
};

/// Best feasible point: a dense grid of `resolution` points per continuous
/// axis and category when q <= 2, otherwise 1000 random starts per category,
/// each refined by an evolution strategy and a compass search. `feasible` is false when nothing feasible is found.
OracleResult oracle_optimum(const Problem& problem, std::size_t resolution, std::uint64_t seed = 0);

/// Oracle cache: one JSON object per line, keyed by benchmark name.
std::vector<OracleResult> read_oracle_cache(const std::filesystem::path& path);
std::optional<OracleResult> find_oracle(const std::filesystem::path& path, std::string_view name);
/// Replaces or appends the record for result.name, keeping name order.
void write_oracle_cache(const std::filesystem::path& path, const OracleResult& result);

std::string to_json_line(const OracleResult& result);
OracleResult from_json_line(std::string_view line);

}  // namespace mvego::bench
