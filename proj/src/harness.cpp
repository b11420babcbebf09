#include "confound/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "confound/errors.hpp"

namespace confound {

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::ModKCDC: return "modKCDC";
    case Algorithm::ModIGCI: return "modIGCI";
    case Algorithm::KCDC: return "KCDC";
    case Algorithm::IGCI: return "IGCI";
    case Algorithm::CAN: return "CAN";
  }
  return "";
}

Algorithm algorithm_from_string(std::string_view name) {
  for (Algorithm a : {Algorithm::ModKCDC, Algorithm::ModIGCI, Algorithm::KCDC, Algorithm::IGCI,
                      Algorithm::CAN}) {
    if (to_string(a) == name) return a;
  }
  throw InvalidArgument(fmt::format("unknown algorithm '{}'", name));
}

HarnessSettings harness_settings_from_json(const Json& j) {
  HarnessSettings s;
  if (j.contains("modKCDC")) s.mod_kcdc = detector_config_from_json(j.at("modKCDC"), s.mod_kcdc);
  if (j.contains("modIGCI")) s.mod_igci = detector_config_from_json(j.at("modIGCI"), s.mod_igci);
  if (j.contains("KCDC")) s.kcdc = scorer_config_from_json(j.at("KCDC"), s.kcdc);
  if (j.contains("IGCI")) s.igci = scorer_config_from_json(j.at("IGCI"), s.igci);
  if (j.contains("can")) s.can = can_config_from_json(j.at("can"), s.can);
  if (j.contains("workers")) s.workers = j.at("workers").get<std::size_t>();
  return s;
}

Json to_json(const HarnessSettings& s) {
  return {{"modKCDC", to_json(s.mod_kcdc)}, {"modIGCI", to_json(s.mod_igci)},
          {"KCDC", to_json(s.kcdc)},        {"IGCI", to_json(s.igci)},
          {"can", to_json(s.can)},          {"workers", s.workers}};
}

namespace {

CausalVerdict plain_verdict(const DirectedScores& s, double delta) {
  const auto detail = fmt::format("v_ab={:.6g} v_ba={:.6g}", s.v_xy, s.v_yx);
  switch (decide_direction(s, delta)) {
    case Direction::XtoY: return {Verdict::AtoB, detail};
    case Direction::YtoX: return {Verdict::BtoA, detail};
    case Direction::Undetermined: break;
  }
  return {Verdict::Undecided, "underdetermined: " + detail};
}

// Runs fn(i) for i in [0, count) on a bounded pool. Each index is handled
// exactly once; callers write results into per-index slots.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

}  // namespace

AlgorithmOutcome run_algorithm(Algorithm algorithm, const BivariateDataset& d,
                               const HarnessSettings& settings, RngSeed seed) {
  switch (algorithm) {
    case Algorithm::ModKCDC:
    case Algorithm::ModIGCI: {
      DetectorConfig cfg = algorithm == Algorithm::ModKCDC ? settings.mod_kcdc : settings.mod_igci;
      cfg.seed = seed;
      Discovery r = discover(d, cfg);
      return {std::move(r.verdict), std::move(r.stats)};
    }
    case Algorithm::KCDC:
    case Algorithm::IGCI: {
      const ScorerConfig& cfg = algorithm == Algorithm::KCDC ? settings.kcdc : settings.igci;
      const BivariateDataset norm = normalize_unit_variance(d);
      return {plain_verdict(directed_scores(norm.a(), norm.b(), cfg), cfg.delta), std::nullopt};
    }
    case Algorithm::CAN:
      return {can_discover(d, settings.can, seed).verdict, std::nullopt};
  }
  throw InvalidArgument("unknown algorithm");
}

std::optional<double> accuracy_of(Algorithm algorithm, std::span<const DatasetRecord> records) {
  std::size_t correct = 0, excluded = 0;
  for (const auto& r : records) {
    if (r.correct()) ++correct;
    if (algorithm == Algorithm::CAN && (!r.error.empty() || r.verdict.tag == Verdict::Undecided)) {
      ++excluded;
    }
  }
  const std::size_t denom = records.size() - excluded;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(denom);
}

const AlgorithmReport& ExperimentReport::result(Algorithm a) const {
  for (const auto& r : results) {
    if (r.algorithm == a) return r;
  }
  throw InvalidArgument(fmt::format("report has no results for {}", to_string(a)));
}

ExperimentReport run_accuracy(const ExperimentPlan& plan, const HarnessSettings& settings) {
  if (plan.n_datasets == 0) throw InvalidArgument("n_datasets must be >= 1");
  if (plan.algorithms.empty()) throw InvalidArgument("plan lists no algorithms");
  plan.spec.validate();

  const std::size_t n_alg = plan.algorithms.size();
  std::vector<std::vector<DatasetRecord>> slots(plan.n_datasets, std::vector<DatasetRecord>(n_alg));

  parallel_for(plan.n_datasets, settings.workers, [&](std::size_t i) {
    GeneratorSpec spec = plan.spec;
    spec.seed = derive_seed(plan.seed, i);
    const std::string id = fmt::format("{}/{}/{}", to_string(spec.family), to_string(spec.noise), i);

    std::optional<LabeledDataset> data;
    std::string gen_error;
    try {
      data = generate(spec);
    } catch (const std::exception& e) {
      gen_error = fmt::format("generation failed: {}", e.what());
    }
    for (std::size_t k = 0; k < n_alg; ++k) {
      DatasetRecord& rec = slots[i][k];
      rec.index = i;
      rec.seed = spec.seed;
      rec.dataset_id = id;
      if (!data) {
        rec.error = gen_error;
        continue;
      }
      rec.truth = plan.swap_columns ? mirrored(data->truth.tag) : data->truth.tag;
      const auto start = std::chrono::steady_clock::now();
      try {
        const BivariateDataset input = plan.swap_columns ? data->data.swapped() : data->data;
        AlgorithmOutcome out = run_algorithm(plan.algorithms[k], input, settings,
                                             derive_seed(spec.seed, 1 + k));
        rec.verdict = std::move(out.verdict);
        rec.stats = std::move(out.stats);
      } catch (const std::exception& e) {
        rec.error = e.what();
        rec.verdict = {Verdict::Undecided, "error"};
      }
      rec.runtime_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
  });

  ExperimentReport report;
  report.plan = plan;
  for (std::size_t k = 0; k < n_alg; ++k) {
    AlgorithmReport ar;
    ar.algorithm = plan.algorithms[k];
    ar.per_dataset.reserve(plan.n_datasets);
    for (std::size_t i = 0; i < plan.n_datasets; ++i) {
      DatasetRecord& rec = slots[i][k];
      if (rec.correct()) ++ar.correct;
      if (!rec.error.empty()) {
        ++ar.errors;
      } else if (rec.verdict.tag == Verdict::Undecided) {
        ++ar.undecided;
      }
      ar.per_dataset.push_back(std::move(rec));
    }
    ar.accuracy = accuracy_of(ar.algorithm, ar.per_dataset);
    report.results.push_back(std::move(ar));
  }
  return report;
}

Json to_json(const ExperimentReport& report) {
  Json algs = Json::array();
  for (const auto& ar : report.results) {
    Json records = Json::array();
    for (const auto& r : ar.per_dataset) {
      Json rec = r.stats ? verdict_record(r.dataset_id, r.verdict, *r.stats)
                         : Json{{"dataset_id", r.dataset_id},
                                {"verdict", to_string(r.verdict.tag)},
                                {"detail", r.verdict.detail},
                                {"mean", nullptr},
                                {"var", nullptr},
                                {"deltas", Json::array()}};
      rec["seed"] = r.seed;
      rec["truth"] = to_string(r.truth);
      rec["correct"] = r.correct();
      rec["runtime_ms"] = r.runtime_ms;
      if (!r.error.empty()) rec["error"] = r.error;
      records.push_back(std::move(rec));
    }
    algs.push_back({{"algorithm", to_string(ar.algorithm)},
                    {"accuracy", ar.accuracy ? Json(*ar.accuracy) : Json(nullptr)},
                    {"correct", ar.correct},
                    {"undecided", ar.undecided},
                    {"fit_failures", ar.algorithm == Algorithm::CAN ? Json(ar.undecided) : Json(nullptr)},
                    {"errors", ar.errors},
                    {"per_dataset", std::move(records)}});
  }
  Json plan_json = {{"spec", to_json(report.plan.spec)},
                    {"n_datasets", report.plan.n_datasets},
                    {"n_samples", report.plan.spec.n},
                    {"seed", report.plan.seed},
                    {"swap_columns", report.plan.swap_columns}};
  return {{"plan", std::move(plan_json)}, {"results", std::move(algs)}};
}

std::vector<SensitivityPoint> run_sensitivity(const SensitivityPlan& plan, const HarnessSettings& settings) {
  std::vector<SensitivityPoint> curve;
  curve.reserve(plan.lambdas.size());
  for (std::size_t li = 0; li < plan.lambdas.size(); ++li) {
    const double lambda = plan.lambdas[li];
    if (!(lambda >= 0.0)) throw InvalidArgument(fmt::format("lambda {} is negative", lambda));
    SensitivityPoint pt{lambda, 0.0, 0.0};
    for (Family fam : {Family::SensitivityDirected, Family::SensitivityCommon}) {
      ExperimentPlan ep;
      ep.spec.family = fam;
      ep.spec.noise = plan.noise;
      ep.spec.n = plan.n_samples;
      ep.spec.lambda = lambda;
      ep.algorithms = {plan.algorithm};
      ep.n_datasets = plan.n_datasets;
      // The same seeds at every lambda, so the curve compares like with like.
      ep.seed = derive_seed(plan.seed, fam == Family::SensitivityDirected ? 0 : 1);
      const double acc = run_accuracy(ep, settings).results.front().accuracy.value_or(0.0);
      (fam == Family::SensitivityDirected ? pt.directed_accuracy : pt.common_accuracy) = acc;
    }
    curve.push_back(pt);
  }
  return curve;
}

std::string sensitivity_csv(std::span<const SensitivityPoint> curve) {
  std::string out = "lambda,directed_accuracy,common_accuracy\n";
  for (const auto& p : curve) {
    out += fmt::format("{},{},{}\n", p.lambda, p.directed_accuracy, p.common_accuracy);
  }
  return out;
}

RealResult run_real(const std::filesystem::path& path, const PairFileSpec& format, Algorithm algorithm,
                    const HarnessSettings& settings, RngSeed seed) {
  LoadedPair loaded = load_pair_file(path, format);
  AlgorithmOutcome out = run_algorithm(algorithm, loaded.data, settings, seed);
  return {std::move(out.verdict), std::move(out.stats), loaded.data.size(), loaded.skipped_rows};
}

}  // namespace confound
