#include "confound/can.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "confound/errors.hpp"
#include "confound/kernels.hpp"

namespace confound {

void CanConfig::validate() const {
  embedding.validate();
  if (!(ridge > 0.0)) throw InvalidArgument("CAN ridge must be > 0");
  if (bandwidth && !(*bandwidth > 0.0)) throw InvalidArgument("CAN bandwidth must be > 0");
  if (!(hsic_alpha > 0.0 && hsic_alpha < 1.0)) throw InvalidArgument("hsic_alpha must be in (0, 1)");
  if (permutations == 0) throw InvalidArgument("permutations must be >= 1");
  if (max_refits == 0) throw InvalidArgument("max_refits must be >= 1");
  if (!(ratio_low < ratio_high)) throw InvalidArgument("ratio_low must be below ratio_high");
}

RegressionFit kernel_ridge_fit(std::span<const double> t, std::span<const double> target,
                               double ridge, std::optional<double> bandwidth) {
  if (t.size() != target.size()) throw InvalidArgument("kernel ridge: length mismatch");
  if (t.size() < 3) throw TooFewSamples("kernel ridge needs at least 3 samples");
  if (!(ridge > 0.0)) throw InvalidArgument("kernel ridge: ridge must be > 0");
  const auto n = static_cast<Eigen::Index>(t.size());
  const Eigen::MatrixXd k = rbf_gram(t, resolve_bandwidth(t, bandwidth));
  Eigen::MatrixXd reg = k;
  reg.diagonal().array() += static_cast<double>(n) * ridge;
  const Eigen::LLT<Eigen::MatrixXd> llt(reg);
  if (llt.info() != Eigen::Success) throw NumericalFailure("kernel ridge factorization failed");
  const Eigen::VectorXd y = as_eigen(target);
  const Eigen::VectorXd pred = k * llt.solve(y);
  if (!pred.allFinite()) throw NumericalFailure("kernel ridge produced non-finite predictions");

  RegressionFit fit;
  fit.predictions.assign(pred.data(), pred.data() + n);
  fit.residuals.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) fit.residuals[i] = target[i] - fit.predictions[i];
  return fit;
}

namespace {

struct CenteredGrams {
  Eigen::MatrixXd kx;
  Eigen::MatrixXd ky;
};

CenteredGrams centered_grams(std::span<const double> x, std::span<const double> y,
                             std::optional<double> bandwidth) {
  if (x.size() != y.size()) throw InvalidArgument("HSIC: length mismatch");
  if (x.size() < 4) throw TooFewSamples("HSIC needs at least 4 samples");
  auto bw = [&](std::span<const double> v) {
    // A constant variable gives a constant Gram, annihilated by centering.
    return bandwidth ? *bandwidth : median_heuristic(v);
  };
  return {double_center(rbf_gram(x, bw(x))), double_center(rbf_gram(y, bw(y)))};
}

}  // namespace

double hsic(std::span<const double> x, std::span<const double> y,
            std::optional<double> bandwidth) {
  const auto g = centered_grams(x, y, bandwidth);
  const double n = static_cast<double>(x.size());
  return g.kx.cwiseProduct(g.ky).sum() / (n * n);
}

HsicTest hsic_permutation_test(std::span<const double> x, std::span<const double> y,
                               std::size_t permutations, RngSeed seed,
                               std::optional<double> bandwidth) {
  const auto g = centered_grams(x, y, bandwidth);
  const std::size_t n = x.size();
  const double norm = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  const double observed = g.kx.cwiseProduct(g.ky).sum() * norm;

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  std::size_t exceed = 0;
  for (std::size_t p = 0; p < permutations; ++p) {
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[static_cast<std::size_t>(rng.below(i + 1))]);
    }
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto pj = static_cast<Eigen::Index>(perm[j]);
      for (std::size_t i = 0; i < n; ++i) {
        total += g.kx(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                 g.ky(static_cast<Eigen::Index>(perm[i]), pj);
      }
    }
    // Relative slack so exact ties (e.g. a constant argument) count as exceedances.
    if (total * norm >= observed - 1e-12 * std::abs(observed)) ++exceed;
  }
  return {observed, static_cast<double>(1 + exceed) / static_cast<double>(1 + permutations)};
}

Verdict can_verdict_from_ratio(double ratio, const CanConfig& cfg) noexcept {
  if (ratio <= cfg.ratio_low) return Verdict::AtoB;
  if (ratio >= cfg.ratio_high) return Verdict::BtoA;
  return Verdict::CommonCause;
}

std::vector<std::size_t> refit_neighbors(std::size_t k0, std::size_t attempts, std::size_t n) {
  std::vector<std::size_t> ks;
  const auto cap = static_cast<long long>(n) - 1;
  for (long long j = 0; ks.size() < attempts && j < 4 * static_cast<long long>(n) + 4; ++j) {
    // Offsets 0, +2, -2, +4, -4, ...
    const long long offset = j % 2 == 1 ? 2 * ((j + 1) / 2) : -2 * (j / 2);
    const long long k = static_cast<long long>(k0) + offset;
    if (k < 2 || k > cap) continue;
    ks.push_back(static_cast<std::size_t>(k));
  }
  return ks;
}

CanResult can_discover(const BivariateDataset& d, const CanConfig& cfg, RngSeed seed) {
  cfg.validate();
  const BivariateDataset norm = normalize_unit_variance(d);
  const std::size_t k0 = cfg.embedding.k_neighbors.value_or(default_neighbors(norm.size()));

  CanResult result;
  for (std::size_t k : refit_neighbors(k0, cfg.max_refits, norm.size())) {
    ++result.attempts;
    EmbeddingConfig emb_cfg = cfg.embedding;
    emb_cfg.k_neighbors = k;
    const Embedding emb = isomap_embed(norm, emb_cfg);

    CanFit fit;
    fit.t = standardize(emb.t);
    fit.k_used = emb.k_used;
    std::vector<double> a(emb.kept_indices.size()), b(emb.kept_indices.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = norm.a()[emb.kept_indices[i]];
      b[i] = norm.b()[emb.kept_indices[i]];
    }
    fit.residual_a = kernel_ridge_fit(fit.t, a, cfg.ridge, cfg.bandwidth).residuals;
    fit.residual_b = kernel_ridge_fit(fit.t, b, cfg.ridge, cfg.bandwidth).residuals;

    const RngSeed attempt_seed = derive_seed(seed, result.attempts);
    const auto test_a = hsic_permutation_test(fit.residual_a, fit.t, cfg.permutations,
                                              derive_seed(attempt_seed, 0), cfg.bandwidth);
    const auto test_b = hsic_permutation_test(fit.residual_b, fit.t, cfg.permutations,
                                              derive_seed(attempt_seed, 1), cfg.bandwidth);
    fit.hsic_a = test_a.statistic;
    fit.hsic_b = test_b.statistic;
    fit.p_a = test_a.p_value;
    fit.p_b = test_b.p_value;
    const double var_b = sample_variance(fit.residual_b);
    fit.ratio = var_b > 0.0 ? sample_variance(fit.residual_a) / var_b
                            : std::numeric_limits<double>::infinity();
    fit.fitted = fit.p_a > cfg.hsic_alpha && fit.p_b > cfg.hsic_alpha;
    result.fit = std::move(fit);

    if (result.fit.fitted) {
      result.verdict = {can_verdict_from_ratio(result.fit.ratio, cfg),
                        fmt::format("r={:.6g} k={} p_a={:.3g} p_b={:.3g}", result.fit.ratio, k,
                                    result.fit.p_a, result.fit.p_b)};
      return result;
    }
  }
  result.verdict = {Verdict::Undecided,
                    fmt::format("model-fit failure after {} attempts", result.attempts)};
  return result;
}

}  // namespace confound
