#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "confound/config.hpp"
#include "confound/detector.hpp"
#include "confound/errors.hpp"
#include "confound/generators.hpp"
#include "confound/harness.hpp"
#include "confound/manifold.hpp"
#include "confound/scorers.hpp"

namespace py = pybind11;
using namespace confound;

namespace {

// JSON crosses the boundary as text; the Python side parses it.
std::string dump(const Json& j) { return j.dump(); }

HarnessSettings settings_from(const std::string& config_json) {
  return config_json.empty() ? HarnessSettings{} : harness_settings_from_json(Json::parse(config_json));
}

ScorerConfig scorer_config(ScorerKind kind, std::optional<double> bandwidth, double ridge) {
  ScorerConfig cfg = plain_scorer(kind);
  cfg.bandwidth = bandwidth;
  cfg.ridge = ridge;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_confound, m) {
  m.doc() = "Latent common cause detection for bivariate data";
  py::register_exception<Error>(m, "ConfoundError", PyExc_RuntimeError);

  m.def("igci_scores", [](const std::vector<double>& x, const std::vector<double>& y) {
    const auto s = igci_scores(x, y);
    return std::pair{s.v_xy, s.v_yx};
  }, py::arg("x"), py::arg("y"));

  m.def("kcdc_scores", [](const std::vector<double>& x, const std::vector<double>& y,
                          std::optional<double> bandwidth, double ridge) {
    const auto s = kcdc_scores(x, y, scorer_config(ScorerKind::KCDC, bandwidth, ridge));
    return std::pair{s.v_xy, s.v_yx};
  }, py::arg("x"), py::arg("y"), py::arg("bandwidth") = py::none(), py::arg("ridge") = 1e-3);

  m.def("cme_norms", [](const std::vector<double>& x, const std::vector<double>& y,
                        std::optional<double> bandwidth, double ridge) {
    return cme_norms(x, y, scorer_config(ScorerKind::KCDC, bandwidth, ridge));
  }, py::arg("x"), py::arg("y"), py::arg("bandwidth") = py::none(), py::arg("ridge") = 1e-3);

  m.def("delta_statistic", &delta_statistic, py::arg("v_at"), py::arg("v_ta"), py::arg("v_bt"),
        py::arg("v_tb"));

  m.def("isomap_embed", [](const std::vector<double>& a, const std::vector<double>& b,
                           std::optional<std::size_t> k) {
    EmbeddingConfig cfg;
    cfg.k_neighbors = k;
    auto e = isomap_embed(BivariateDataset(a, b), cfg);
    return py::make_tuple(e.t, e.kept_indices, e.k_used);
  }, py::arg("a"), py::arg("b"), py::arg("k") = py::none());

  m.def("run_algorithm_json", [](const std::vector<double>& a, const std::vector<double>& b,
                                 const std::string& algorithm, std::uint64_t seed, const std::string& config) {
    const auto out = run_algorithm(algorithm_from_string(algorithm), BivariateDataset(a, b),
                                   settings_from(config), seed);
    Json j = out.stats ? verdict_record("", out.verdict, *out.stats)
                       : Json{{"verdict", to_string(out.verdict.tag)}, {"detail", out.verdict.detail}};
    j.erase("dataset_id");
    j["algorithm"] = algorithm;
    return dump(j);
  }, py::arg("a"), py::arg("b"), py::arg("algorithm"), py::arg("seed"), py::arg("config") = "");

  m.def("generate_json", [](const std::string& spec_json) {
    const auto d = generate(generator_spec_from_json(Json::parse(spec_json)));
    Json j{{"a", d.data.a()}, {"b", d.data.b()}, {"truth", to_string(d.truth.tag)},
           {"rejected_rows", d.rejected_rows}};
    j["latent_t"] = d.latent_t ? Json(*d.latent_t) : Json(nullptr);
    return dump(j);
  }, py::arg("spec"));

  m.def("run_accuracy_json", [](const std::string& spec_json, const std::vector<std::string>& algorithms,
                                std::size_t n_datasets, std::uint64_t seed, bool swap_columns,
                                const std::string& config) {
    ExperimentPlan plan;
    plan.spec = generator_spec_from_json(Json::parse(spec_json));
    plan.algorithms.clear();
    for (const auto& a : algorithms) plan.algorithms.push_back(algorithm_from_string(a));
    plan.n_datasets = n_datasets;
    plan.seed = seed;
    plan.swap_columns = swap_columns;
    const auto settings = settings_from(config);
    py::gil_scoped_release release;
    return dump(to_json(run_accuracy(plan, settings)));
  }, py::arg("spec"), py::arg("algorithms"), py::arg("n_datasets"), py::arg("seed"),
     py::arg("swap_columns") = false, py::arg("config") = "");

  m.def("run_sensitivity", [](const std::vector<double>& lambdas, const std::string& noise,
                              std::size_t n_datasets, std::size_t n_samples, std::uint64_t seed,
                              const std::string& algorithm, const std::string& config) {
    SensitivityPlan plan;
    plan.lambdas = lambdas;
    plan.noise = noise_from_string(noise);
    plan.n_datasets = n_datasets;
    plan.n_samples = n_samples;
    plan.seed = seed;
    plan.algorithm = algorithm_from_string(algorithm);
    const auto settings = settings_from(config);
    std::vector<std::tuple<double, double, double>> out;
    {
      py::gil_scoped_release release;
      for (const auto& p : run_sensitivity(plan, settings)) {
        out.emplace_back(p.lambda, p.directed_accuracy, p.common_accuracy);
      }
    }
    return out;
  }, py::arg("lambdas"), py::arg("noise") = "normal", py::arg("n_datasets") = 100,
     py::arg("n_samples") = 250, py::arg("seed") = 0, py::arg("algorithm") = "modIGCI",
     py::arg("config") = "");

  m.def("load_pair", [](const std::filesystem::path& path, const std::string& column_a,
                        const std::string& column_b) {
    PairFileSpec spec;
    if (!column_a.empty() || !column_b.empty()) spec = {PairFormat::CsvWithHeader, column_a, column_b};
    auto loaded = load_pair_file(path, spec);
    return py::make_tuple(loaded.data.a(), loaded.data.b(), loaded.skipped_rows);
  }, py::arg("path"), py::arg("column_a") = "", py::arg("column_b") = "");
}
