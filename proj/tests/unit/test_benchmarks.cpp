#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "helpers.hpp"
#include "mvego/benchmarks.hpp"

using namespace mvego;

namespace {

// Rescaled Branin written from the textbook form on [-5, 10] x [0, 15].
double branin_reference(double x1, double x2) {
  const double pi = std::numbers::pi;
  const double u = 15.0 * x1 - 5.0;
  const double v = 15.0 * x2;
  const double b = 5.0 / (4.0 * pi * pi);
  const double c = 5.0 / pi;
  const double t = 1.0 / (8.0 * pi);
  const double raw = std::pow(v - b * u * u + c * u - 6.0, 2) + 10.0 * (1.0 - t) * std::cos(u) + 10.0;
  return (raw - 54.8104) / 51.9496;
}

double goldstein_reference(double x1, double x2, double x3, double x4) {
  return 53.3108 + 0.184901 * x1 - 5.02914e-6 * std::pow(x1, 3) + 7.72522e-8 * std::pow(x1, 4) -
         0.0870775 * x2 - 0.106959 * x3 + 7.98772e-6 * std::pow(x3, 3) + 0.00242482 * x4 +
         1.32851e-6 * std::pow(x4, 3) - 0.00146393 * x1 * x2 - 0.00301588 * x1 * x3 -
         0.00272291 * x1 * x4 + 0.0017004 * x2 * x3 + 0.0038428 * x2 * x4 - 0.000198969 * x3 * x4 +
         1.86025e-5 * x1 * x2 * x3 - 1.88719e-6 * x1 * x2 * x4 + 2.50923e-5 * x1 * x3 * x4 -
         5.62199e-5 * x2 * x3 * x4;
}

}  // namespace

TEST_CASE("Branin categories") {
  CHECK(bench::branin_mixed(1.0, 1.0, 0, 0).constraint == doctest::Approx(0.6));
  testing::Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double a = testing::uniform(rng, 0, 1);
    const double b = testing::uniform(rng, 0, 1);
    const double h = branin_reference(a, b);
    CHECK(bench::branin_h(a, b) == doctest::Approx(h).epsilon(1e-13));
    CHECK(bench::branin_mixed(a, b, 0, 0).objective == doctest::Approx(h).epsilon(1e-13));
    CHECK(bench::branin_mixed(a, b, 0, 1).objective == doctest::Approx(0.4 * h).epsilon(1e-13));
    CHECK(bench::branin_mixed(a, b, 1, 0).objective == doctest::Approx(-0.75 * h + 3.0).epsilon(1e-13));
    CHECK(bench::branin_mixed(a, b, 1, 1).objective == doctest::Approx(-0.5 * h + 1.4).epsilon(1e-13));
    CHECK(bench::branin_mixed(a, b, 0, 0).constraint == doctest::Approx(a * b - 0.4).epsilon(1e-14));
    CHECK(bench::branin_mixed(a, b, 0, 1).constraint == doctest::Approx(1.5 * a * b - 0.4).epsilon(1e-14));
    CHECK(bench::branin_mixed(a, b, 1, 0).constraint == doctest::Approx(1.5 * a * b - 0.2).epsilon(1e-14));
    CHECK(bench::branin_mixed(a, b, 1, 1).constraint == doctest::Approx(1.2 * a * b - 0.3).epsilon(1e-14));
  }
  CHECK_THROWS_AS(bench::branin_mixed(1.1, 0.5, 0, 0), DomainError);
  CHECK_THROWS_AS(bench::branin_mixed(0.5, 0.5, 2, 0), DomainError);
}

TEST_CASE("augmented Branin is a sum of five blocks") {
  std::vector<double> x(10);
  for (int i = 0; i < 5; ++i) {
    x[2 * i] = 0.3;
    x[2 * i + 1] = 0.7;
  }
  for (int z1 = 0; z1 < 2; ++z1) {
    for (int z2 = 0; z2 < 2; ++z2) {
      const auto block = bench::branin_mixed(0.3, 0.7, z1, z2);
      const auto total = bench::branin_augmented(x, z1, z2);
      CHECK(total.objective == doctest::Approx(5.0 * block.objective).epsilon(1e-13));
      CHECK(total.constraint == doctest::Approx(5.0 * block.constraint).epsilon(1e-13));
    }
  }
  std::vector<double> ones(10, 1.0);
  CHECK(bench::branin_augmented(ones, 0, 0).constraint == doctest::Approx(3.0));
  testing::Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    for (auto& v : x) v = testing::uniform(rng, 0, 1);
    double f = 0.0;
    double g = 0.0;
    for (int k = 0; k < 5; ++k) {
      const auto b = bench::branin_mixed(x[2 * k], x[2 * k + 1], 1, 0);
      f += b.objective;
      g += b.constraint;
    }
    CHECK(bench::branin_augmented(x, 1, 0).objective == doctest::Approx(f).epsilon(1e-13));
    CHECK(bench::branin_augmented(x, 1, 0).constraint == doctest::Approx(g).epsilon(1e-13));
  }
  CHECK_THROWS_AS(bench::branin_augmented(std::vector<double>(9, 0.5), 0, 0), DomainError);
}

TEST_CASE("Goldstein category table") {
  const double x3[] = {20, 50, 80};
  const double x4[] = {20, 50, 80};
  const double c1[] = {2, -2, 1};
  const double c2[] = {0.5, -1, -2};
  for (int z1 = 0; z1 < 3; ++z1) {
    for (int z2 = 0; z2 < 3; ++z2) {
      const auto c = bench::goldstein_category(z1, z2);
      CHECK(c.x3 == x3[z1]);
      CHECK(c.x4 == x4[z2]);
      CHECK(c.c1 == c1[z1]);
      CHECK(c.c2 == c2[z2]);
    }
  }
  const auto c = bench::goldstein_category(1, 2);
  CHECK(c.x3 == 50);
  CHECK(c.x4 == 80);
  CHECK(c.c1 == -2);
  CHECK(c.c2 == -2);
}

TEST_CASE("Goldstein values") {
  testing::Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const double a = testing::uniform(rng, 0, 100);
    const double b = testing::uniform(rng, 0, 100);
    const int z1 = testing::uniform_int(rng, 0, 2);
    const int z2 = testing::uniform_int(rng, 0, 2);
    const auto c = bench::goldstein_category(z1, z2);
    const auto v = bench::goldstein_mixed(a, b, z1, z2);
    CHECK(v.objective == doctest::Approx(goldstein_reference(a, b, c.x3, c.x4)).epsilon(1e-12));
    CHECK(v.constraint ==
          doctest::Approx(c.c1 * std::pow(std::sin(a / 10.0), 3) + c.c2 * std::pow(std::cos(b / 20.0), 2))
              .epsilon(1e-12));
  }
  for (int z1 = 0; z1 < 3; ++z1) {
    for (int z2 = 0; z2 < 3; ++z2) {
      CHECK(std::abs(bench::goldstein_mixed(0.0, 10.0 * std::numbers::pi, z1, z2).constraint) < 1e-15);
    }
  }
  CHECK_THROWS_AS(bench::goldstein_mixed(-1.0, 5.0, 0, 0), DomainError);
  CHECK_THROWS_AS(bench::goldstein_mixed(1.0, 5.0, 0, 3), DomainError);
}

TEST_CASE("benchmark registry") {
  for (const auto& name : bench::names()) {
    const auto p = bench::make_problem(name);
    CHECK(p.name == name);
    CHECK(p.n_constraints == 1);
    CHECK(p.sense == ConstraintSense::GreaterEqualZero);
  }
  const auto b = bench::default_budget("branin");
  CHECK(b.n_initial == 20);
  CHECK(b.n_infill == 20);
  CHECK(b.ga_population * b.ga_generations == 40);
  const auto g = bench::default_budget("goldstein");
  CHECK(g.n_initial == 27);
  CHECK(g.n_infill == 54);
  CHECK(g.ga_population == 8);
  CHECK(g.ga_generations == 9);
  const auto a = bench::default_budget("branin_augmented");
  CHECK(a.n_initial + a.n_infill == a.ga_population * a.ga_generations);
  CHECK_THROWS_AS(bench::make_problem("rocket"), DomainError);
}

TEST_CASE("grid oracles") {
  SUBCASE("Branin") {
    const auto problem = bench::make_problem("branin");
    const auto r = bench::oracle_optimum(problem, 400);
    CHECK(r.feasible);
    CHECK(r.value == doctest::Approx(-0.80).epsilon(0.03));
    CHECK(problem.feasible(problem.evaluate(r.point).constraints));
    CHECK(r.category == encode_category(r.point.z, problem.space));
    const auto again = bench::oracle_optimum(problem, 400);
    CHECK(again.value == r.value);
    CHECK(again.point == r.point);
  }
  SUBCASE("Goldstein") {
    const auto r = bench::oracle_optimum(bench::make_problem("goldstein"), 400);
    CHECK(r.feasible);
    CHECK(r.value == doctest::Approx(38.2).epsilon(0.01));
    CHECK(r.point.z == std::vector<int>{2, 2});
  }
  SUBCASE("quadratic stub") {
    Problem p;
    p.name = "stub";
    p.space = MixedSpace({{-1, 1}, {0, 4}}, {2});
    p.evaluate = [](const MixedPoint& w) {
      return Evaluation{std::pow(w.x[0] - 0.25, 2) + std::pow(w.x[1] - 1.0, 2) + w.z[0], {}};
    };
    const auto r = bench::oracle_optimum(p, 201);
    CHECK(r.point.z[0] == 0);
    CHECK(std::abs(r.point.x[0] - 0.25) <= 0.01);
    CHECK(std::abs(r.point.x[1] - 1.0) <= 0.02);
  }
  SUBCASE("infeasible at resolution") {
    Problem p;
    p.name = "never";
    p.space = MixedSpace({{0, 1}}, {});
    p.n_constraints = 1;
    p.evaluate = [](const MixedPoint& w) { return Evaluation{w.x[0], {1.0}}; };
    const auto r = bench::oracle_optimum(p, 50);
    CHECK_FALSE(r.feasible);
    CHECK(std::isnan(r.value));
  }
}

TEST_CASE("augmented Branin optimum equals five optimal blocks") {
  const double block = bench::oracle_optimum(bench::make_problem("branin"), 400).value;
  const auto cached = bench::find_oracle(std::filesystem::path(MVEGO_SOURCE_DIR) / "data/oracle_cache.jsonl",
                                         "branin_augmented");
  REQUIRE(cached.has_value());
  CHECK(cached->feasible);
  CHECK(cached->category == 0);
  // x1 * x2 >= 0.4 is active at x1 = 1, off the grid
  CHECK(cached->value / 5.0 <= block);
  CHECK(cached->value / 5.0 == doctest::Approx(branin_reference(1.0, 0.4)).epsilon(1e-4));
}

TEST_CASE("oracle cache round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "mvego_oracle_test";
  std::filesystem::remove_all(dir);
  const auto path = dir / "cache.jsonl";
  bench::OracleResult a{"goldstein", 400, true, 38.17, {{91.5, 96.2}, {2, 2}}, 8};
  bench::OracleResult b{"branin", 400, true, -0.81, {{1.0, 0.4}, {0, 0}}, 0};
  bench::write_oracle_cache(path, a);
  bench::write_oracle_cache(path, b);
  a.value = 38.0;
  bench::write_oracle_cache(path, a);
  const auto all = bench::read_oracle_cache(path);
  REQUIRE(all.size() == 2);
  CHECK(all[0].name == "branin");
  CHECK(bench::find_oracle(path, "goldstein")->value == 38.0);
  CHECK(bench::find_oracle(path, "goldstein")->point == a.point);
  CHECK_FALSE(bench::find_oracle(path, "rocket").has_value());
  std::filesystem::remove_all(dir);
}
