#include "confound/scorers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "confound/data.hpp"
#include "confound/errors.hpp"
#include "confound/kernels.hpp"

namespace confound {

std::string_view to_string(ScorerKind k) noexcept {
  return k == ScorerKind::IGCI ? "IGCI" : "KCDC";
}

ScorerKind scorer_from_string(std::string_view name) {
  if (name == "IGCI" || name == "igci") return ScorerKind::IGCI;
  if (name == "KCDC" || name == "kcdc") return ScorerKind::KCDC;
  throw InvalidArgument(fmt::format("unknown scorer '{}'", name));
}

void ScorerConfig::validate() const {
  if (!(delta >= 0.0)) throw InvalidArgument(fmt::format("delta must be >= 0, got {}", delta));
  if (!(ridge > 0.0)) throw InvalidArgument(fmt::format("ridge must be > 0, got {}", ridge));
  if (bandwidth && !(*bandwidth > 0.0)) {
    throw InvalidArgument(fmt::format("bandwidth must be > 0, got {}", *bandwidth));
  }
}

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InvalidArgument(fmt::format("length mismatch: {} vs {}", x.size(), y.size()));
  }
  if (x.size() < 3) throw TooFewSamples(fmt::format("need at least 3 samples, got {}", x.size()));
}

std::vector<double> rescale_unit(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) throw DegenerateData("IGCI needs at least two distinct values per variable");
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [&](double s) { return (s - *lo) / range; });
  return out;
}

// Mean log slope of y against x over consecutive x-sorted points.
double igci_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return x[i] != x[j] ? x[i] < x[j] : y[i] < y[j];
  });

  std::vector<std::size_t> kept;
  kept.reserve(order.size());
  for (std::size_t idx : order) {
    if (kept.empty() || x[idx] != x[kept.back()]) kept.push_back(idx);
  }
  if (kept.size() < 2) throw DegenerateData("fewer than 2 distinct points after merging ties");

  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
    const double dx = x[kept[i + 1]] - x[kept[i]];
    const double dy = y[kept[i + 1]] - y[kept[i]];
    if (dy != 0.0) sum += std::log(std::abs(dy / dx));
  }
  return sum / static_cast<double>(kept.size() - 1);
}

}  // namespace

DirectedScores igci_scores(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const auto xs = rescale_unit(x);
  const auto ys = rescale_unit(y);
  return {igci_slope(xs, ys), igci_slope(ys, xs)};
}

std::vector<double> cme_norms(std::span<const double> x, std::span<const double> y,
                              const ScorerConfig& cfg) {
  check_pair(x, y);
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(x.size());
  // One bandwidth, taken from the conditioning variable, serves both kernels.
  const double sigma = resolve_bandwidth(x, cfg.bandwidth);
  const Eigen::MatrixXd kx = rbf_gram(x, sigma);
  const Eigen::MatrixXd ky = rbf_gram(y, sigma);

  Eigen::MatrixXd reg = kx;
  reg.diagonal().array() += static_cast<double>(n) * cfg.ridge;
  const Eigen::LLT<Eigen::MatrixXd> llt(reg);
  if (llt.info() != Eigen::Success) throw NumericalFailure("regularized Gram factorization failed");

  // Column i of `weights` is W k_i.
  const Eigen::MatrixXd weights = llt.solve(kx);
  const Eigen::MatrixXd projected = ky * weights;
  const Eigen::VectorXd sq = weights.cwiseProduct(projected).colwise().sum().transpose();

  std::vector<double> norms(x.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(sq(i))) throw NumericalFailure("non-finite embedding norm");
    norms[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, sq(i)));
  }
  return norms;
}

DirectedScores kcdc_scores(std::span<const double> x, std::span<const double> y,
                           const ScorerConfig& cfg) {
  return {sample_variance(cme_norms(x, y, cfg)), sample_variance(cme_norms(y, x, cfg))};
}

DirectedScores directed_scores(std::span<const double> x, std::span<const double> y,
                               const ScorerConfig& cfg) {
  return cfg.scorer == ScorerKind::IGCI ? igci_scores(x, y) : kcdc_scores(x, y, cfg);
}

Direction decide_direction(const DirectedScores& s, double delta) {
  if (std::abs(s.v_xy - s.v_yx) < delta) return Direction::Undetermined;
  return s.v_xy < s.v_yx ? Direction::XtoY : Direction::YtoX;
}

}  // namespace confound
