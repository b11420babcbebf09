#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace confound {

/// Asymmetry scores for the two causal directions. Lower is preferred.
struct DirectedScores {
  double v_xy = 0.0;  // X -> Y
  double v_yx = 0.0;  // Y -> X

  DirectedScores swapped() const noexcept { return {v_yx, v_xy}; }
  friend bool operator==(const DirectedScores&, const DirectedScores&) = default;
};

enum class ScorerKind { IGCI, KCDC };
enum class IgciReference { UniformRescale };

std::string_view to_string(ScorerKind k) noexcept;
ScorerKind scorer_from_string(std::string_view name);

struct ScorerConfig {
  ScorerKind scorer = ScorerKind::KCDC;
  // Underdetermination threshold for the plain directed decision.
  double delta = 1e-4;
  // Fixed RBF bandwidth; nullopt selects the median heuristic of the
  // conditioning variable, shared by both Gram matrices.
  std::optional<double> bandwidth;
  double ridge = 1e-3;
  IgciReference igci_reference = IgciReference::UniformRescale;

  /// Throws InvalidArgument if delta < 0, ridge <= 0 or bandwidth <= 0.
  void validate() const;
};

enum class Direction { XtoY, YtoX, Undetermined };

/// Slope-based IGCI with a uniform reference measure.
///
/// Both variables are affinely rescaled to [0, 1]. For v_xy the points are
/// sorted by (x, y), repeated x values are collapsed onto their first point,
/// and v_xy = 1/(m-1) * sum log|dy/dx| over the m-1 consecutive gaps of the
/// m remaining points; gaps with dy == 0 contribute nothing. v_yx is the
/// same computation with the roles exchanged.
///
/// Throws DegenerateData if either variable is constant or fewer than two
/// distinct points remain.
DirectedScores igci_scores(std::span<const double> x, std::span<const double> y);

/// RKHS norms of the conditional mean embeddings mu_{Y | X = x_i}:
/// sqrt(k_i^T W K_Y W k_i), W = (K_X + n * ridge * I)^{-1}, k_i the i-th
/// column of K_X. Both Gram matrices use the bandwidth resolved on x.
std::vector<double> cme_norms(std::span<const double> x, std::span<const double> y,
                              const ScorerConfig& cfg);

/// KCDC deviance: sample variance of the conditional embedding norms in each
/// direction.
DirectedScores kcdc_scores(std::span<const double> x, std::span<const double> y,
                           const ScorerConfig& cfg);

/// Dispatches on cfg.scorer.
DirectedScores directed_scores(std::span<const double> x, std::span<const double> y,
                               const ScorerConfig& cfg);

Direction decide_direction(const DirectedScores& s, double delta);

}  // namespace confound
