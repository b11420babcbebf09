#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "confound/data.hpp"
#include "confound/manifold.hpp"
#include "confound/rng.hpp"

namespace confound {

struct CanConfig {
  EmbeddingConfig embedding;
  double ridge = 1e-3;
  std::optional<double> bandwidth;
  // A fit is accepted when both permutation p-values exceed this level.
  double hsic_alpha = 0.05;
  std::size_t permutations = 200;
  std::size_t max_refits = 5;
  double ratio_low = 0.65;
  double ratio_high = 1.65;

  void validate() const;
};

struct RegressionFit {
  std::vector<double> predictions;
  std::vector<double> residuals;
};

/// Kernel ridge regression (the Gaussian-process posterior mean):
/// predictions = K (K + n * ridge * I)^{-1} target, RBF Gram K on t.
RegressionFit kernel_ridge_fit(std::span<const double> t, std::span<const double> target,
                               double ridge, std::optional<double> bandwidth = std::nullopt);

/// Biased HSIC V-statistic, trace(K_x H K_y H) / n^2, with RBF kernels.
double hsic(std::span<const double> x, std::span<const double> y,
            std::optional<double> bandwidth = std::nullopt);

struct HsicTest {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Permutation test of independence: p = (1 + #{null >= observed}) / (1 + permutations).
HsicTest hsic_permutation_test(std::span<const double> x, std::span<const double> y,
                               std::size_t permutations, RngSeed seed,
                               std::optional<double> bandwidth = std::nullopt);

struct CanFit {
  std::vector<double> t;
  std::vector<double> residual_a;
  std::vector<double> residual_b;
  double hsic_a = 0.0;
  double hsic_b = 0.0;
  double p_a = 0.0;
  double p_b = 0.0;
  double ratio = 0.0;  // var(residual_a) / var(residual_b)
  bool fitted = false;
  std::size_t k_used = 0;
};

/// AtoB if r <= ratio_low, BtoA if r >= ratio_high, CommonCause otherwise.
Verdict can_verdict_from_ratio(double ratio, const CanConfig& cfg) noexcept;

struct CanResult {
  CausalVerdict verdict;
  CanFit fit;  // accepted fit, or the last attempt when none passed
  std::size_t attempts = 0;
};

/// Neighborhood sizes tried by successive refits: k, k+2, k-2, k+4, k-4, ...
std::vector<std::size_t> refit_neighbors(std::size_t k0, std::size_t attempts, std::size_t n);

/// Confounding-additive-noise baseline with the latent fitted by Isomap and
/// the two constraints u_A independent of C and u_B independent of C screened
/// by HSIC permutation tests. Returns Undecided ("model-fit failure") when no
/// attempt passes.
CanResult can_discover(const BivariateDataset& d, const CanConfig& cfg, RngSeed seed);

}  // namespace confound
