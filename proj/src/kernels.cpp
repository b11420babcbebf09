#include "confound/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "confound/errors.hpp"

namespace confound {

double median_heuristic(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw InvalidArgument("median heuristic needs at least 2 points");
  std::vector<double> d;
  d.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d.push_back(std::abs(x[i] - x[j]));
  }
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  double med = *mid;
  if (d.size() % 2 == 0) {
    med = 0.5 * (med + *std::max_element(d.begin(), mid));
  }
  if (med > 0.0) return med;

  double sum = 0.0;
  std::size_t count = 0;
  for (double v : d) {
    if (v > 0.0) {
      sum += v;
      ++count;
    }
  }
  return count > 0 ? sum / static_cast<double>(count) : 1.0;
}

double resolve_bandwidth(std::span<const double> x, std::optional<double> fixed) {
  if (fixed) {
    if (!(*fixed > 0.0)) throw InvalidArgument(fmt::format("bandwidth must be > 0, got {}", *fixed));
    return *fixed;
  }
  return median_heuristic(x);
}

Eigen::MatrixXd rbf_gram(std::span<const double> x, double sigma) {
  const auto n = static_cast<Eigen::Index>(x.size());
  const double scale = -0.5 / (sigma * sigma);
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    k(j, j) = 1.0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double diff = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      const double v = std::exp(scale * diff * diff);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

Eigen::MatrixXd double_center(const Eigen::MatrixXd& k) {
  const Eigen::VectorXd col_mean = k.colwise().mean().transpose();
  const Eigen::VectorXd row_mean = k.rowwise().mean();
  const double total = col_mean.mean();
  Eigen::MatrixXd out = k;
  out.colwise() -= row_mean;
  out.rowwise() -= col_mean.transpose();
  out.array() += total;
  return out;
}

}  // namespace confound
