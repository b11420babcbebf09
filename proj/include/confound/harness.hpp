#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "confound/can.hpp"
#include "confound/config.hpp"
#include "confound/detector.hpp"
#include "confound/generators.hpp"

namespace confound {

enum class Algorithm { ModKCDC, ModIGCI, KCDC, IGCI, CAN };

std::string_view to_string(Algorithm a) noexcept;
Algorithm algorithm_from_string(std::string_view name);

inline ScorerConfig plain_scorer(ScorerKind kind) {
  ScorerConfig c;
  c.scorer = kind;
  return c;
}

/// Per-algorithm configuration shared by every harness entry point.
struct HarnessSettings {
  DetectorConfig mod_kcdc = DetectorConfig::mod_kcdc();
  DetectorConfig mod_igci = DetectorConfig::mod_igci();
  ScorerConfig kcdc = plain_scorer(ScorerKind::KCDC);
  ScorerConfig igci = plain_scorer(ScorerKind::IGCI);
  CanConfig can;
  // Worker threads for dataset-level parallelism; 0 uses the hardware count.
  std::size_t workers = 0;
};

/// Reads {"modKCDC": detector, "modIGCI": detector, "KCDC": scorer,
/// "IGCI": scorer, "can": can, "workers": n}; absent blocks keep defaults.
HarnessSettings harness_settings_from_json(const Json& j);
Json to_json(const HarnessSettings& s);

struct AlgorithmOutcome {
  CausalVerdict verdict;
  std::optional<DeltaStats> stats;
};

/// Runs one algorithm on one dataset. `seed` drives bootstraps and
/// permutation tests; plain scorers ignore it.
AlgorithmOutcome run_algorithm(Algorithm algorithm, const BivariateDataset& d,
                               const HarnessSettings& settings, RngSeed seed);

struct ExperimentPlan {
  // Generator template; its seed is replaced per dataset.
  GeneratorSpec spec;
  std::vector<Algorithm> algorithms{Algorithm::ModKCDC, Algorithm::ModIGCI};
  std::size_t n_datasets = 100;
  RngSeed seed = 0;
  // Exchange A and B before scoring; the expected verdict is mirrored.
  bool swap_columns = false;
};

struct DatasetRecord {
  std::size_t index = 0;
  RngSeed seed = 0;
  std::string dataset_id;
  Verdict truth = Verdict::Undecided;
  CausalVerdict verdict;
  std::optional<DeltaStats> stats;
  double runtime_ms = 0.0;
  std::string error;
  bool correct() const noexcept { return error.empty() && verdict.tag == truth; }
};

struct AlgorithmReport {
  Algorithm algorithm = Algorithm::ModKCDC;
  std::vector<DatasetRecord> per_dataset;
  std::size_t correct = 0;
  // Undecided verdicts; they count as wrong except for CAN, where they are
  // excluded from the denominator.
  std::size_t undecided = 0;
  std::size_t errors = 0;
  // nullopt only for CAN when no dataset produced a fit.
  std::optional<double> accuracy;
};

struct ExperimentReport {
  ExperimentPlan plan;
  std::vector<AlgorithmReport> results;

  const AlgorithmReport& result(Algorithm a) const;
};

/// Accuracy from the per-dataset records of one algorithm.
std::optional<double> accuracy_of(Algorithm algorithm, std::span<const DatasetRecord> records);

ExperimentReport run_accuracy(const ExperimentPlan& plan, const HarnessSettings& settings = {});

Json to_json(const ExperimentReport& report);

struct SensitivityPlan {
  std::vector<double> lambdas;
  NoiseKind noise = NoiseKind::Normal01;
  std::size_t n_datasets = 100;
  std::size_t n_samples = 250;
  RngSeed seed = 0;
  Algorithm algorithm = Algorithm::ModIGCI;
};

struct SensitivityPoint {
  double lambda = 0.0;
  double directed_accuracy = 0.0;
  double common_accuracy = 0.0;
};

/// Accuracy of the chosen detector on both sensitivity families per lambda.
std::vector<SensitivityPoint> run_sensitivity(const SensitivityPlan& plan,
                                              const HarnessSettings& settings = {});

std::string sensitivity_csv(std::span<const SensitivityPoint> curve);

struct RealResult {
  CausalVerdict verdict;
  std::optional<DeltaStats> stats;
  std::size_t rows = 0;
  std::size_t skipped_rows = 0;
};

RealResult run_real(const std::filesystem::path& path, const PairFileSpec& format, Algorithm algorithm,
                    const HarnessSettings& settings = {}, RngSeed seed = 0);

}  // namespace confound
