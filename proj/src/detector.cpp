#include "confound/detector.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "confound/errors.hpp"

namespace confound {

DeltaStats DeltaStats::from_deltas(std::vector<double> deltas) {
  DeltaStats s;
  s.mean = sample_mean(deltas);
  s.var = deltas.size() > 1 ? sample_variance(deltas) : 0.0;
  s.deltas = std::move(deltas);
  return s;
}

std::string_view to_string(RowAction a) noexcept {
  switch (a) {
    case RowAction::Directed: return "Directed";
    case RowAction::CommonCause: return "CommonCause";
    case RowAction::Failure: return "Failure";
  }
  return "Failure";
}

RowAction row_action_from_string(std::string_view name) {
  for (RowAction a : {RowAction::Directed, RowAction::CommonCause, RowAction::Failure}) {
    if (to_string(a) == name) return a;
  }
  throw InvalidArgument(fmt::format("unknown row action '{}'", name));
}

ThresholdTable::ThresholdTable(std::vector<ThresholdRow> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw InvalidArgument("threshold table has no rows");
  std::sort(rows_.begin(), rows_.end(),
            [](const ThresholdRow& x, const ThresholdRow& y) { return x.mean_low < y.mean_low; });
  if (rows_.front().mean_low != 0.0 || rows_.back().mean_high != 1.0) {
    throw InvalidArgument("threshold rows must cover [0, 1]");
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    if (!(r.mean_low < r.mean_high)) {
      throw InvalidArgument(fmt::format("row {} has empty mean interval", i));
    }
    if (!(r.var_threshold >= 0.0)) throw InvalidArgument(fmt::format("row {} has negative threshold", i));
    if (r.below == RowAction::CommonCause || r.above == RowAction::Directed) {
      throw InvalidArgument(fmt::format("row {}: low variance cannot mean common cause", i));
    }
    if (i > 0) {
      if (rows_[i - 1].mean_high != r.mean_low) {
        throw InvalidArgument(fmt::format("rows {} and {} leave a gap or overlap", i - 1, i));
      }
      // Variance thresholds shrink toward low means; equal neighbours are allowed.
      if (rows_[i - 1].var_threshold > r.var_threshold) {
        throw InvalidArgument(fmt::format("variance thresholds decrease between rows {} and {}", i - 1, i));
      }
    }
  }
}

ThresholdTable ThresholdTable::mod_kcdc() {
  return ThresholdTable({
      {0.0, 0.25, 0.03, RowAction::Failure, RowAction::CommonCause, "low mean with low variance"},
      {0.25, 0.65, 0.03, RowAction::Directed, RowAction::CommonCause, ""},
      {0.65, 0.9, 0.06, RowAction::Directed, RowAction::CommonCause, ""},
      {0.9, 1.0, 0.06, RowAction::Directed, RowAction::Failure, "high mean with high variance"},
  });
}

ThresholdTable ThresholdTable::mod_igci() {
  return ThresholdTable({
      {0.0, 0.25, 0.01, RowAction::Failure, RowAction::CommonCause, "low mean with low variance"},
      {0.25, 0.45, 0.01, RowAction::Directed, RowAction::CommonCause, ""},
      {0.45, 0.9, 0.02, RowAction::Directed, RowAction::CommonCause, ""},
      {0.9, 1.0, 0.02, RowAction::Directed, RowAction::Failure, "high mean with high variance"},
  });
}

const ThresholdRow& ThresholdTable::locate(double mean) const {
  if (!(mean >= 0.0 && mean <= 1.0)) {
    throw InvalidArgument(fmt::format("mean Delta {} outside [0, 1]", mean));
  }
  for (const auto& r : rows_) {
    if (mean >= r.mean_low && mean < r.mean_high) return r;
  }
  return rows_.back();
}

RowAction ThresholdTable::action(double mean, double var) const {
  const auto& row = locate(mean);
  return var <= row.var_threshold ? row.below : row.above;
}

DetectorConfig DetectorConfig::mod_kcdc(RngSeed seed) {
  DetectorConfig cfg;
  cfg.scorer.scorer = ScorerKind::KCDC;
  cfg.table = ThresholdTable::mod_kcdc();
  cfg.seed = seed;
  return cfg;
}

DetectorConfig DetectorConfig::mod_igci(RngSeed seed) {
  DetectorConfig cfg;
  cfg.scorer.scorer = ScorerKind::IGCI;
  cfg.table = ThresholdTable::mod_igci();
  cfg.seed = seed;
  return cfg;
}

void DetectorConfig::validate() const {
  scorer.validate();
  embedding.validate();
  if (n_bootstraps < 2) throw InvalidArgument("n_bootstraps must be >= 2");
  if (!(subsample_fraction > 0.0 && subsample_fraction <= 1.0)) {
    throw InvalidArgument(fmt::format("subsample_fraction {} outside (0, 1]", subsample_fraction));
  }
}

double delta_statistic(double v_at, double v_ta, double v_bt, double v_tb) noexcept {
  const double gap_a = std::abs(v_at - v_ta);
  const double gap_b = std::abs(v_bt - v_tb);
  const double largest = std::max(gap_a, gap_b);
  if (!(largest > 0.0)) return 0.0;
  return std::min(1.0, std::abs(gap_a - gap_b) / largest);
}

double single_delta(const BivariateDataset& d, const DetectorConfig& cfg) {
  Embedding emb;
  std::vector<double> t;
  try {
    emb = isomap_embed(d, cfg.embedding);
    t = standardize(emb.t);
  } catch (const Error& e) {
    throw EmbeddingFailure(e.what());
  }

  std::vector<double> a(emb.kept_indices.size()), b(emb.kept_indices.size());
  for (std::size_t i = 0; i < emb.kept_indices.size(); ++i) {
    a[i] = d.a()[emb.kept_indices[i]];
    b[i] = d.b()[emb.kept_indices[i]];
  }
  const DirectedScores at = directed_scores(a, t, cfg.scorer);
  const DirectedScores bt = directed_scores(b, t, cfg.scorer);
  return delta_statistic(at.v_xy, at.v_yx, bt.v_xy, bt.v_yx);
}

DeltaStats bootstrap_deltas(const BivariateDataset& d, const DetectorConfig& cfg) {
  cfg.validate();
  std::vector<double> deltas(cfg.n_bootstraps);
  for (std::size_t i = 0; i < cfg.n_bootstraps; ++i) {
    const BivariateDataset sample = subsample(d, cfg.subsample_fraction, derive_seed(cfg.seed, i));
    try {
      deltas[i] = single_delta(sample, cfg);
    } catch (const EmbeddingFailure& e) {
      throw EmbeddingFailure(fmt::format("bootstrap iteration {}: {}", i, e.what()));
    }
  }
  return DeltaStats::from_deltas(std::move(deltas));
}

CausalVerdict classify(const DeltaStats& stats, const ThresholdTable& table,
                       const DirectedScores& directed_tiebreak) {
  const ThresholdRow& row = table.locate(stats.mean);
  const RowAction act = stats.var <= row.var_threshold ? row.below : row.above;
  const std::string where = fmt::format("mean={:.6g} var={:.6g} region=[{}, {}{} threshold={}",
                                        stats.mean, stats.var, row.mean_low, row.mean_high,
                                        row.mean_high == 1.0 ? "]" : ")", row.var_threshold);
  switch (act) {
    case RowAction::Directed: {
      const Direction dir = decide_direction(directed_tiebreak, 0.0);
      return {dir == Direction::YtoX ? Verdict::BtoA : Verdict::AtoB, where};
    }
    case RowAction::CommonCause:
      return {Verdict::CommonCause, where};
    case RowAction::Failure:
      break;
  }
  const std::string note = row.failure_note.empty() ? "outside decision regions" : row.failure_note;
  return {Verdict::Undecided, fmt::format("failure mode ({}): {}", note, where)};
}

Discovery discover(const BivariateDataset& d, const DetectorConfig& cfg) {
  const BivariateDataset norm = normalize_unit_variance(d);
  Discovery out;
  out.stats = bootstrap_deltas(norm, cfg);
  out.tiebreak = directed_scores(norm.a(), norm.b(), cfg.scorer);
  out.verdict = classify(out.stats, cfg.table, out.tiebreak);
  return out;
}

}  // namespace confound
