#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "robustmean/bench.hpp"
#include "robustmean/comparators.hpp"
#include "robustmean/data.hpp"
#include "robustmean/diagnostics.hpp"
#include "robustmean/estimator.hpp"
#include "robustmean/score.hpp"
#include "robustmean/tuning.hpp"

namespace py = pybind11;
using namespace robustmean;

namespace {

ScoreFamily make_family(const std::string& name, double beta, int p) {
  switch (family_from_name(name)) {
    case FamilyKind::Huber:
      return ScoreFamily::huber(beta);
    case FamilyKind::Catoni:
      return ScoreFamily::catoni(beta);
    case FamilyKind::Polynomial:
      return ScoreFamily::polynomial(beta, p);
  }
  throw std::logic_error("unknown family kind");
}

void score_binds(py::module& m) {
  py::class_<ScoreFamily>(m, "ScoreFamily")
      .def_static("huber", &ScoreFamily::huber, py::arg("beta"))
      .def_static("catoni", &ScoreFamily::catoni, py::arg("beta"))
      .def_static("polynomial", &ScoreFamily::polynomial, py::arg("beta"),
                  py::arg("p") = 5)
      .def_property_readonly("beta", &ScoreFamily::beta)
      .def_property_readonly("p", &ScoreFamily::p)
      .def_property_readonly("name",
                             [](const ScoreFamily& f) {
                               return family_name(f.kind());
                             })
      .def("psi", &ScoreFamily::psi, py::arg("x"))
      .def("psi_prime", &ScoreFamily::psi_prime, py::arg("x"))
      .def("rho", &ScoreFamily::rho, py::arg("x"))
      .def("weight", &ScoreFamily::weight, py::arg("r"))
      .def("gamma", &ScoreFamily::gamma);
  m.def("make_family", &make_family, py::arg("name"), py::arg("beta"),
        py::arg("p") = 5);
}

void estimator_binds(py::module& m) {
  py::class_<EstimateResult>(m, "EstimateResult")
      .def_readonly("estimate", &EstimateResult::estimate)
      .def_readonly("iterations", &EstimateResult::iterations)
      .def_readonly("converged", &EstimateResult::converged)
      .def_readonly("residual", &EstimateResult::residual)
      .def_readonly("weights", &EstimateResult::weights)
      .def_readonly("trace", &EstimateResult::trace);
  m.def(
      "irls_estimate",
      [](const Matrix& X, const ScoreFamily& f, double tol, int max_iter,
         std::optional<Vector> init) {
        EstimatorConfig cfg{f, tol, max_iter, std::move(init)};
        return irls_estimate(X, cfg);
      },
      py::arg("X"), py::arg("score"), py::arg("tol") = 1e-10,
      py::arg("max_iter") = 200, py::arg("init") = std::nullopt);
  m.def("coordinatewise_median", &coordinatewise_median, py::arg("X"));
  m.def("fixed_point_residual", &fixed_point_residual, py::arg("X"),
        py::arg("theta"), py::arg("score"));
  m.def(
      "population_location_1d",
      [](const std::vector<std::pair<double, double>>& atoms,
         const ScoreFamily& f) {
        std::vector<Atom> converted;
        converted.reserve(atoms.size());
        for (const auto& [value, prob] : atoms) {
          converted.push_back({value, prob});
        }
        return population_location_1d(converted, f);
      },
      py::arg("atoms"), py::arg("score"),
      "atoms: list of (value, probability) pairs");
}

void diagnostics_binds(py::module& m) {
  py::class_<VarianceEstimates>(m, "VarianceEstimates")
      .def_readonly("v_total", &VarianceEstimates::v_total)
      .def_readonly("v_directional", &VarianceEstimates::v_directional)
      .def_readonly("trace_cov", &VarianceEstimates::trace_cov)
      .def_readonly("opnorm_cov", &VarianceEstimates::opnorm_cov);
  py::class_<UnicityReport>(m, "UnicityReport")
      .def_readonly("passed", &UnicityReport::passed)
      .def_readonly("lhs", &UnicityReport::lhs)
      .def_readonly("bound", &UnicityReport::bound);
  m.def("influence_statistic", &influence_statistic, py::arg("X"),
        py::arg("theta"), py::arg("score"));
  m.def("variance_estimates", &variance_estimates, py::arg("X"),
        py::arg("theta"), py::arg("score"));
  m.def("check_unicity_assumption", &check_unicity_assumption, py::arg("X"),
        py::arg("score"));
}

void comparator_binds(py::module& m) {
  py::class_<GeometricMedianResult>(m, "GeometricMedianResult")
      .def_readonly("point", &GeometricMedianResult::point)
      .def_readonly("iterations", &GeometricMedianResult::iterations)
      .def_readonly("converged", &GeometricMedianResult::converged);
  m.def("empirical_mean", &empirical_mean, py::arg("X"));
  m.def("geometric_median", &geometric_median, py::arg("X"),
        py::arg("tol") = 1e-8, py::arg("max_iter") = 1000);
  m.def("geometric_median_of_means", &geometric_median_of_means, py::arg("X"),
        py::arg("k"), py::arg("tol") = 1e-8, py::arg("max_iter") = 1000);
}

void tuning_binds(py::module& m) {
  py::class_<GridPoint>(m, "GridPoint")
      .def_readonly("beta", &GridPoint::beta)
      .def_readonly("criterion", &GridPoint::criterion)
      .def_readonly("converged", &GridPoint::converged);
  py::class_<BetaSelection>(m, "BetaSelection")
      .def_readonly("beta_hat", &BetaSelection::beta_hat)
      .def_readonly("mad", &BetaSelection::mad)
      .def_readonly("c_psi", &BetaSelection::c_psi)
      .def_readonly("grid", &BetaSelection::grid);
  m.def("mad", &mad, py::arg("X"), py::arg("gm_tol") = 1e-8);
  m.def(
      "select_beta",
      [](const Matrix& X, const std::string& family, int grid_size,
         double corruption_budget, int p) {
        SelectBetaOptions opts;
        opts.grid_size = grid_size;
        opts.corruption_budget = corruption_budget;
        opts.p = p;
        return select_beta(X, family_from_name(family), opts);
      },
      py::arg("X"), py::arg("family"), py::arg("grid_size") = 40,
      py::arg("corruption_budget") = 0.05, py::arg("p") = 5);
}

void data_binds(py::module& m) {
  py::class_<Dataset>(m, "Dataset")
      .def_readonly("X", &Dataset::X)
      .def_readonly("true_mean", &Dataset::true_mean)
      .def_readonly("outlier_indices", &Dataset::outlier_indices);
  m.def(
      "generate_pareto",
      [](Index n, Index d, double alpha, double scale, std::uint64_t seed,
         Index corrupt_count, double corrupt_scale) {
        DatasetSpec spec{ParetoCoords{alpha, scale}, n, d, std::nullopt,
                         seed};
        if (corrupt_count > 0) {
          spec.corruption = CorruptionSpec{corrupt_count,
                                           ScaledOnes{corrupt_scale}};
        }
        return generate(spec);
      },
      py::arg("n"), py::arg("d"), py::arg("alpha"), py::arg("scale") = 1.0,
      py::arg("seed") = 0, py::arg("corrupt_count") = 0,
      py::arg("corrupt_scale") = 0.0);
  m.def(
      "generate_student_mixture",
      [](Index n, Index d,
         const std::vector<std::tuple<double, Vector, double>>& components,
         std::uint64_t seed, Index corrupt_count, double corrupt_scale) {
        StudentMixture mix;
        for (const auto& [w, mu, dof] : components) {
          mix.components.push_back({w, mu, dof});
        }
        DatasetSpec spec{mix, n, d, std::nullopt, seed};
        if (corrupt_count > 0) {
          spec.corruption = CorruptionSpec{corrupt_count,
                                           ScaledOnes{corrupt_scale}};
        }
        return generate(spec);
      },
      py::arg("n"), py::arg("d"), py::arg("components"), py::arg("seed") = 0,
      py::arg("corrupt_count") = 0, py::arg("corrupt_scale") = 0.0,
      "components: list of (weight, mean_vector, dof) tuples");
  m.def(
      "generate_preset",
      [](int preset, std::uint64_t seed) {
        const auto presets = dataset_presets();
        if (preset < 1 || preset > static_cast<int>(presets.size())) {
          throw std::invalid_argument("preset must be between 1 and 4");
        }
        DatasetSpec spec = presets[static_cast<size_t>(preset - 1)];
        spec.seed = seed;
        return generate(spec);
      },
      py::arg("preset"), py::arg("seed") = 0);
  m.def("mix_seed", &mix_seed, py::arg("master"), py::arg("index"));
}

}  // namespace

PYBIND11_MODULE(_robustmean, m) {
  m.doc() = "Robust multivariate mean estimation";
  m.attr("__version__") = "0.1.0";
  score_binds(m);
  estimator_binds(m);
  diagnostics_binds(m);
  comparator_binds(m);
  tuning_binds(m);
  data_binds(m);
}
