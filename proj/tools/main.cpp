#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "confound/config.hpp"
#include "confound/errors.hpp"
#include "confound/harness.hpp"

namespace fs = std::filesystem;
using namespace confound;

namespace {

constexpr std::size_t kQuickDatasets = 25;

struct Common {
  std::string config_path;
  std::string out;
  RngSeed seed = 0;
  std::size_t workers = 0;
};

HarnessSettings load_settings(const Common& c) {
  HarnessSettings s = c.config_path.empty() ? HarnessSettings{}
                                            : harness_settings_from_json(read_json_file(c.config_path));
  if (c.workers != 0) s.workers = c.workers;
  return s;
}

void emit(const std::string& out, const Json& j) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json_file(out, j);
  }
}

void emit_text(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw IoError(fmt::format("cannot write {}", out));
  f << text;
}

PairFileSpec pair_spec(const std::string& format, const std::string& col_a, const std::string& col_b) {
  PairFileSpec s;
  if (format == "csv") {
    s.format = PairFormat::CsvWithHeader;
  } else if (format != "whitespace") {
    throw InvalidArgument(fmt::format("unknown format '{}'", format));
  }
  s.column_a = col_a;
  s.column_b = col_b;
  return s;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--config", c.config_path, "Settings JSON (see docs/config.md)");
  cmd->add_option("--out", c.out, "Output path; stdout when omitted");
  cmd->add_option("--workers", c.workers, "Worker threads (0 = hardware count)");
}

GeneratorSpec make_spec(const std::string& family, const std::string& noise, std::size_t n,
                        std::optional<double> lambda) {
  GeneratorSpec spec;
  spec.family = family_from_string(family);
  spec.noise = noise_from_string(noise);
  spec.n = n;
  spec.lambda = lambda;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latent common cause detection for bivariate data"};
  app.require_subcommand(1);

  Common common;
  std::string family = "DirectedAdditive1";
  std::string noise = "normal";
  std::size_t n_samples = 250;
  std::optional<double> lambda;
  std::vector<std::string> algorithms;
  std::string algorithm = "modKCDC";
  std::optional<std::size_t> n_datasets;
  bool quick = false;
  bool swap = false;
  std::string input;
  std::string format = "whitespace";
  std::string col_a, col_b;
  std::vector<double> lambdas{0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0};

  auto* gen = app.add_subcommand("generate", "Write a synthetic pair file and a sidecar JSON");
  gen->add_option("--spec", family, "Generator family")->required();
  gen->add_option("--noise", noise, "normal | uniform | exponential");
  gen->add_option("--n-samples", n_samples, "Rows");
  gen->add_option("--lambda", lambda, "Noise scale for the sensitivity families");
  add_common(gen, common);
  gen->get_option("--out")->required()->description("Pair file path; the sidecar goes to <out>.json");

  auto* disc = app.add_subcommand("discover", "Run one algorithm on a pair file");
  disc->add_option("input", input, "Pair file")->required()->check(CLI::ExistingFile);
  disc->add_option("--algorithm", algorithm, "modKCDC | modIGCI | KCDC | IGCI | CAN");
  disc->add_option("--format", format, "whitespace | csv");
  disc->add_option("--column-a", col_a, "CSV header of column A");
  disc->add_option("--column-b", col_b, "CSV header of column B");
  add_common(disc, common);

  auto* exp = app.add_subcommand("experiment", "Accuracy sweep over generated datasets");
  exp->add_option("--spec", family, "Generator family")->required();
  exp->add_option("--noise", noise, "normal | uniform | exponential");
  exp->add_option("--algorithm", algorithms, "Algorithms (repeatable)");
  exp->add_option("--n-datasets", n_datasets, "Datasets per algorithm (default 100, CAN-only 10)");
  exp->add_option("--n-samples", n_samples, "Rows per dataset");
  exp->add_option("--lambda", lambda, "Noise scale for the sensitivity families");
  exp->add_flag("--quick", quick, "Use 25 datasets");
  exp->add_flag("--swap", swap, "Exchange columns before scoring");
  add_common(exp, common);

  auto* sens = app.add_subcommand("sensitivity", "Accuracy against the noise scale lambda");
  sens->add_option("--lambdas", lambdas, "Lambda values")->delimiter(',');
  sens->add_option("--noise", noise, "normal | uniform | exponential");
  std::string sens_algorithm = "modIGCI";
  sens->add_option("--algorithm", sens_algorithm, "Detector");
  sens->add_option("--n-datasets", n_datasets, "Datasets per point (default 100)");
  sens->add_option("--n-samples", n_samples, "Rows per dataset");
  sens->add_flag("--quick", quick, "Use 25 datasets");
  add_common(sens, common);

  auto* real = app.add_subcommand("real", "Run a detector on a real-data file");
  real->add_option("input", input, "Data file")->required()->check(CLI::ExistingFile);
  real->add_option("--algorithm", algorithm, "Detector");
  real->add_option("--format", format, "whitespace | csv");
  real->add_option("--column-a", col_a, "CSV header of column A");
  real->add_option("--column-b", col_b, "CSV header of column B");
  add_common(real, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      GeneratorSpec spec = make_spec(family, noise, n_samples, lambda);
      spec.seed = common.seed;
      const LabeledDataset d = generate(spec);
      write_pair_file(common.out, d.data);
      Json side = {{"spec", to_json(spec)},
                   {"truth", to_string(d.truth.tag)},
                   {"seed", spec.seed},
                   {"rejected_rows", d.rejected_rows}};
      write_json_file(fs::path(common.out).concat(".json"), side);
    } else if (*disc || *real) {
      const HarnessSettings settings = load_settings(common);
      const RealResult r = run_real(input, pair_spec(format, col_a, col_b), algorithm_from_string(algorithm),
                                    settings, common.seed);
      Json j = r.stats ? verdict_record(fs::path(input).filename().string(), r.verdict, *r.stats)
                       : Json{{"dataset_id", fs::path(input).filename().string()},
                              {"verdict", to_string(r.verdict.tag)},
                              {"detail", r.verdict.detail}};
      j["algorithm"] = algorithm;
      j["rows"] = r.rows;
      j["skipped_rows"] = r.skipped_rows;
      emit(common.out, j);
    } else if (*exp) {
      ExperimentPlan plan;
      plan.spec = make_spec(family, noise, n_samples, lambda);
      if (algorithms.empty()) algorithms = {"modKCDC", "modIGCI"};
      plan.algorithms.clear();
      for (const auto& a : algorithms) plan.algorithms.push_back(algorithm_from_string(a));
      const bool can_only = plan.algorithms.size() == 1 && plan.algorithms[0] == Algorithm::CAN;
      plan.n_datasets = n_datasets.value_or(quick ? kQuickDatasets : (can_only ? 10 : 100));
      plan.seed = common.seed;
      plan.swap_columns = swap;
      const ExperimentReport report = run_accuracy(plan, load_settings(common));
      for (const auto& ar : report.results) {
        std::fprintf(stderr, "%s %s/%s: accuracy %s (correct %zu, undecided %zu, errors %zu)\n",
                     std::string(to_string(ar.algorithm)).c_str(), family.c_str(), noise.c_str(),
                     ar.accuracy ? fmt::format("{:.3f}", *ar.accuracy).c_str() : "n/a", ar.correct,
                     ar.undecided, ar.errors);
      }
      emit(common.out, to_json(report));
    } else if (*sens) {
      SensitivityPlan plan;
      plan.lambdas = lambdas;
      plan.noise = noise_from_string(noise);
      plan.n_datasets = n_datasets.value_or(quick ? kQuickDatasets : 100);
      plan.n_samples = n_samples;
      plan.seed = common.seed;
      plan.algorithm = algorithm_from_string(sens_algorithm);
      emit_text(common.out, sensitivity_csv(run_sensitivity(plan, load_settings(common))));
    }
  } catch (const confound::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
