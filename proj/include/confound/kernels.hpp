#pragma once

#include <optional>
#include <span>

#include <Eigen/Dense>

namespace confound {

/// Median of the pairwise absolute differences |x_i - x_j|, i < j.
/// Falls back to the mean nonzero distance, then 1.0, when the median is 0.
double median_heuristic(std::span<const double> x);

/// Bandwidth actually used for `x`: the fixed value if given, otherwise the
/// median heuristic.
double resolve_bandwidth(std::span<const double> x, std::optional<double> fixed);

/// Gaussian RBF Gram matrix, k(s, t) = exp(-(s - t)^2 / (2 sigma^2)).
Eigen::MatrixXd rbf_gram(std::span<const double> x, double sigma);

/// H K H with H = I - 11^T / n.
Eigen::MatrixXd double_center(const Eigen::MatrixXd& k);

inline Eigen::Map<const Eigen::VectorXd> as_eigen(std::span<const double> x) {
  return {x.data(), static_cast<Eigen::Index>(x.size())};
}

}  // namespace confound
