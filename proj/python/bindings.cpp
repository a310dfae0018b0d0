#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mvego/benchmarks.hpp"
#include "mvego/ego.hpp"
#include "mvego/gp.hpp"
#include "mvego/harness.hpp"
#include "mvego/infill.hpp"
#include "mvego/kernels.hpp"
#include "mvego/search_space.hpp"
#include "mvego/training.hpp"

namespace py = pybind11;
using namespace mvego;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_python(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

MixedSpace make_space(const std::vector<std::pair<double, double>>& bounds, const std::vector<int>& levels) {
  std::vector<Bounds> b;
  for (const auto& [lo, hi] : bounds) b.push_back({lo, hi});
  return MixedSpace(std::move(b), levels);
}

TrainerConfig trainer_config(std::size_t max_evaluations, std::uint64_t seed) {
  TrainerConfig c;
  c.max_evaluations = max_evaluations;
  c.seed = seed;
  return c;
}

EgoConfig ego_config(std::size_t trainer_evaluations, std::size_t ga_population, std::size_t ga_generations) {
  EgoConfig c;
  c.trainer.max_evaluations = trainer_evaluations;
  c.ga.population = ga_population;
  c.ga.generations = ga_generations;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Constrained mixed-variable EGO";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<harness::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<TrainingError>(m, "TrainingError", PyExc_RuntimeError);
  py::register_exception<ConditioningError>(m, "ConditioningError", PyExc_RuntimeError);

  py::enum_<KernelKind>(m, "KernelKind")
      .value("HeHS", KernelKind::HeteroHS)
      .value("HoHS", KernelKind::HomoHS)
      .value("CS", KernelKind::CS);

  py::class_<MixedPoint>(m, "MixedPoint")
      .def(py::init<std::vector<double>, std::vector<int>>(), py::arg("x"), py::arg("z"))
      .def_readwrite("x", &MixedPoint::x)
      .def_readwrite("z", &MixedPoint::z)
      .def("__eq__", [](const MixedPoint& a, const MixedPoint& b) { return a == b; })
      .def("__repr__", [](const MixedPoint& w) {
        return "MixedPoint(x=" + py::repr(py::cast(w.x)).cast<std::string>() +
               ", z=" + py::repr(py::cast(w.z)).cast<std::string>() + ")";
      });

  py::class_<MixedSpace>(m, "MixedSpace")
      .def(py::init(&make_space), py::arg("bounds"), py::arg("levels"))
      .def_property_readonly("continuous_dims", &MixedSpace::continuous_dims)
      .def_property_readonly("discrete_dims", &MixedSpace::discrete_dims)
      .def_property_readonly("levels", &MixedSpace::levels)
      .def_property_readonly("categories", [](const MixedSpace& s) { return category_count(s); })
      .def("contains", &MixedSpace::contains);

  m.def("lhs_initial_doe", &lhs_initial_doe, py::arg("space"), py::arg("n"), py::arg("seed"));
  m.def("hyperparameter_count", &hyperparameter_count, py::arg("kind"), py::arg("space"));
  m.def("gower_distance", &gower_distance, py::arg("a"), py::arg("b"), py::arg("space"));

  py::class_<KernelSpec>(m, "KernelSpec")
      .def_static("default", &KernelSpec::make_default, py::arg("kind"), py::arg("space"))
      .def_property_readonly("kind", &KernelSpec::kind)
      .def_property_readonly("hyperparameters", [](const KernelSpec& s) { return flatten_hyperparameters(s); });

  m.def("kernel", &mixed_kernel, py::arg("a"), py::arg("b"), py::arg("spec"), py::arg("space"));
  m.def(
      "gram",
      [](const KernelSpec& spec, const MixedSpace& space, const std::vector<MixedPoint>& points) {
        const Eigen::MatrixXd k = MixedKernel(spec, space).gram(points);
        std::vector<std::vector<double>> rows(static_cast<std::size_t>(k.rows()));
        for (Eigen::Index i = 0; i < k.rows(); ++i) {
          for (Eigen::Index j = 0; j < k.cols(); ++j) rows[static_cast<std::size_t>(i)].push_back(k(i, j));
        }
        return rows;
      },
      py::arg("spec"), py::arg("space"), py::arg("points"));

  py::class_<GaussianProcess>(m, "GaussianProcess")
      .def_static(
          "fit",
          [](const MixedSpace& space, std::vector<MixedPoint> points, const std::vector<double>& y,
             const KernelSpec& spec) { return GaussianProcess::fit(space, std::move(points), y, spec); },
          py::arg("space"), py::arg("points"), py::arg("y"), py::arg("spec"))
      .def_static(
          "train",
          [](const MixedSpace& space, const std::vector<MixedPoint>& points, const std::vector<double>& y,
             KernelKind kind, std::size_t max_evaluations, std::uint64_t seed) {
            return train_and_fit(points, y, kind, space, trainer_config(max_evaluations, seed)).gp;
          },
          py::arg("space"), py::arg("points"), py::arg("y"), py::arg("kind"), py::arg("max_evaluations") = 0,
          py::arg("seed") = 1)
      .def("predict",
           [](const GaussianProcess& gp, const MixedPoint& w) {
             const auto p = gp.predict(w);
             return std::make_pair(p.mean, p.variance);
           })
      .def_property_readonly("mean", &GaussianProcess::mean)
      .def_property_readonly("process_variance", &GaussianProcess::process_variance)
      .def_property_readonly("nugget", &GaussianProcess::nugget)
      .def_property_readonly("spec", &GaussianProcess::spec);

  m.def(
      "expected_improvement",
      [](double mean, double variance, double y_min) { return expected_improvement({mean, variance}, y_min); },
      py::arg("mean"), py::arg("variance"), py::arg("y_min"));
  m.def(
      "probability_of_feasibility",
      [](const std::vector<std::pair<double, double>>& constraints) {
        std::vector<Prediction> p;
        for (const auto& [mean, variance] : constraints) p.push_back({mean, variance});
        return probability_of_feasibility(p);
      },
      py::arg("constraints"));

  py::class_<Problem>(m, "Problem")
      .def_readonly("name", &Problem::name)
      .def_readonly("space", &Problem::space)
      .def_readonly("n_constraints", &Problem::n_constraints)
      .def("__call__", [](const Problem& p, const MixedPoint& w) {
        const auto e = p.evaluate(w);
        return std::make_pair(e.objective, e.constraints);
      });

  m.def("benchmarks", &bench::names);
  m.def(
      "make_problem", [](const std::string& name) { return bench::make_problem(name); }, py::arg("name"));
  m.def(
      "oracle",
      [](const std::string& name, std::size_t resolution, std::uint64_t seed) {
        return to_python(nlohmann::json::parse(
            bench::to_json_line(bench::oracle_optimum(bench::make_problem(name), resolution, seed))));
      },
      py::arg("name"), py::arg("resolution") = 400, py::arg("seed") = 0);

  m.def(
      "run_mixed_ego",
      [](const Problem& problem, KernelKind kind, std::size_t n_initial, std::size_t n_infill, std::uint64_t seed,
         std::size_t trainer_evaluations, std::size_t ga_population, std::size_t ga_generations) {
        RunRecord r;
        {
          py::gil_scoped_release release;
          r = run_mixed_ego(problem, kind, n_initial, n_infill,
                            ego_config(trainer_evaluations, ga_population, ga_generations), seed);
        }
        return to_python(harness::to_json(r));
      },
      py::arg("problem"), py::arg("kind"), py::arg("n_initial"), py::arg("n_infill"), py::arg("seed") = 1,
      py::arg("trainer_evaluations") = 0, py::arg("ga_population") = 50, py::arg("ga_generations") = 50);
  m.def(
      "run_categorywise_ego",
      [](const Problem& problem, std::size_t n_initial, std::size_t n_infill, std::uint64_t seed,
         std::size_t trainer_evaluations, std::size_t ga_population, std::size_t ga_generations) {
        RunRecord r;
        {
          py::gil_scoped_release release;
          r = run_categorywise_ego(problem, n_initial, n_infill,
                                   ego_config(trainer_evaluations, ga_population, ga_generations), seed);
        }
        return to_python(harness::to_json(r));
      },
      py::arg("problem"), py::arg("n_initial"), py::arg("n_infill"), py::arg("seed") = 1,
      py::arg("trainer_evaluations") = 0, py::arg("ga_population") = 50, py::arg("ga_generations") = 50);
  m.def(
      "run_penalized_ga",
      [](const Problem& problem, std::size_t population, std::size_t generations, std::uint64_t seed) {
        return to_python(harness::to_json(run_penalized_ga(problem, population, generations, seed)));
      },
      py::arg("problem"), py::arg("population"), py::arg("generations"), py::arg("seed") = 1);

  m.def(
      "default_config",
      [](const std::string& benchmark) { return to_python(harness::CampaignConfig::defaults(benchmark).to_json()); },
      py::arg("benchmark"));
  m.def(
      "run_campaign",
      [](const py::object& config) {
        const auto c = harness::CampaignConfig::from_json(from_python(config));
        harness::CampaignResult result;
        {
          py::gil_scoped_release release;
          result = harness::run_campaign(c);
        }
        return harness::format_summary_csv(result.summary);
      },
      py::arg("config"));
  m.def(
      "summarize",
      [](const std::filesystem::path& run_dir) { return harness::format_summary_csv(harness::summarize(run_dir)); },
      py::arg("run_dir"));
}
