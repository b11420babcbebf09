#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "confound/data.hpp"
#include "confound/manifold.hpp"
#include "confound/rng.hpp"
#include "confound/scorers.hpp"

namespace confound {

/// Per-bootstrap Delta values with their mean and unbiased variance.
struct DeltaStats {
  std::vector<double> deltas;
  double mean = 0.0;
  double var = 0.0;

  static DeltaStats from_deltas(std::vector<double> deltas);
  friend bool operator==(const DeltaStats&, const DeltaStats&) = default;
};

enum class RowAction { Directed, CommonCause, Failure };

std::string_view to_string(RowAction a) noexcept;
RowAction row_action_from_string(std::string_view name);

/// One mean-region of a threshold table. Variance at or below the threshold
/// takes `below`; strictly above takes `above`.
struct ThresholdRow {
  double mean_low = 0.0;
  double mean_high = 1.0;
  double var_threshold = 0.0;
  RowAction below = RowAction::Directed;
  RowAction above = RowAction::CommonCause;
  // Shown in Undecided verdicts produced by this row.
  std::string failure_note;
};

/// Mean regions are lower-inclusive and upper-exclusive; the top row also
/// contains its upper bound.
class ThresholdTable {
 public:
  explicit ThresholdTable(std::vector<ThresholdRow> rows);

  /// Defaults calibrated for the modified KCDC detector.
  static ThresholdTable mod_kcdc();
  /// Defaults calibrated for the modified IGCI detector.
  static ThresholdTable mod_igci();

  std::span<const ThresholdRow> rows() const noexcept { return rows_; }

  /// Row containing `mean`. Throws InvalidArgument outside [0, 1].
  const ThresholdRow& locate(double mean) const;

  /// Action for a (mean, var) pair.
  RowAction action(double mean, double var) const;

 private:
  std::vector<ThresholdRow> rows_;
};

struct DetectorConfig {
  ScorerConfig scorer;
  EmbeddingConfig embedding;
  std::size_t n_bootstraps = 25;
  double subsample_fraction = 0.95;
  ThresholdTable table = ThresholdTable::mod_kcdc();
  RngSeed seed = 0;

  /// KCDC scorer with the modKCDC table.
  static DetectorConfig mod_kcdc(RngSeed seed = 0);
  /// IGCI scorer with the modIGCI table.
  static DetectorConfig mod_igci(RngSeed seed = 0);

  void validate() const;
};

/// | |v_at - v_ta| - |v_bt - v_tb| | / max(|v_at - v_ta|, |v_bt - v_tb|),
/// defined as 0 when both differences vanish. Always in [0, 1].
double delta_statistic(double v_at, double v_ta, double v_bt, double v_tb) noexcept;

/// Delta for a single (A, B) sample: embed, standardize the coordinate,
/// score (A, T) and (B, T).
double single_delta(const BivariateDataset& d, const DetectorConfig& cfg);

/// Runs single_delta on cfg.n_bootstraps subsamples. Iteration i draws its
/// subsample with derive_seed(cfg.seed, i). Embedding errors are rethrown as
/// EmbeddingFailure naming the iteration.
DeltaStats bootstrap_deltas(const BivariateDataset& d, const DetectorConfig& cfg);

/// Maps Delta statistics to a verdict. Directed rows are oriented by the
/// directed scores with a zero threshold.
CausalVerdict classify(const DeltaStats& stats, const ThresholdTable& table,
                       const DirectedScores& directed_tiebreak);

struct Discovery {
  CausalVerdict verdict;
  DeltaStats stats;
  DirectedScores tiebreak;
};

/// Full pipeline: normalize, bootstrap Delta, classify with the scorer's
/// verdict on the whole dataset as orientation.
Discovery discover(const BivariateDataset& d, const DetectorConfig& cfg);

}  // namespace confound
