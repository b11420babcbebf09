#include "confound/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "confound/errors.hpp"
#include "confound/kernels.hpp"

namespace confound {

void EmbeddingConfig::validate() const {
  if (k_neighbors && *k_neighbors < 2) {
    throw InvalidArgument(fmt::format("k_neighbors must be >= 2, got {}", *k_neighbors));
  }
}

std::size_t default_neighbors(std::size_t n) noexcept {
  const auto scaled = static_cast<std::size_t>(std::ceil(0.04 * static_cast<double>(n)));
  return std::max<std::size_t>(10, scaled);
}

void Graph::add_edge(std::size_t u, std::size_t v, double weight) {
  if (u == v || has_edge(u, v)) return;
  auto insert = [](std::vector<Edge>& list, std::size_t to, double w) {
    const auto pos = std::lower_bound(list.begin(), list.end(), to,
                                      [](const Edge& e, std::size_t t) { return e.to < t; });
    list.insert(pos, Edge{to, w});
  };
  insert(adjacency_[u], v, weight);
  insert(adjacency_[v], u, weight);
}

std::size_t Graph::edge_count() const noexcept {
  std::size_t total = 0;
  for (const auto& list : adjacency_) total += list.size();
  return total / 2;
}

bool Graph::has_edge(std::size_t u, std::size_t v) const {
  const auto& list = adjacency_[u];
  const auto pos = std::lower_bound(list.begin(), list.end(), v,
                                    [](const Edge& e, std::size_t t) { return e.to < t; });
  return pos != list.end() && pos->to == v;
}

std::vector<std::size_t> Graph::components() const {
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> label(size(), unset);
  std::size_t next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t root = 0; root < size(); ++root) {
    if (label[root] != unset) continue;
    label[root] = next;
    stack.push_back(root);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (const Edge& e : adjacency_[u]) {
        if (label[e.to] == unset) {
          label[e.to] = next;
          stack.push_back(e.to);
        }
      }
    }
    ++next;
  }
  return label;
}

Graph knn_graph(std::span<const Point2> points, std::size_t k) {
  const std::size_t n = points.size();
  if (k == 0 || n < k + 1) {
    throw TooFewPoints(fmt::format("kNN graph with k={} needs at least {} points, got {}", k, k + 1, n));
  }
  Graph g(n);
  std::vector<std::pair<double, std::size_t>> cand;
  cand.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    cand.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dx = points[i].x - points[j].x;
      const double dy = points[i].y - points[j].y;
      cand.emplace_back(std::sqrt(dx * dx + dy * dy), j);
    }
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
    for (std::size_t r = 0; r < k; ++r) g.add_edge(i, cand[r].second, cand[r].first);
  }
  return g;
}

Eigen::MatrixXd geodesic_distances(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd dist = Eigen::MatrixXd::Constant(n, n, inf);
  for (std::size_t u = 0; u < g.size(); ++u) {
    const auto ui = static_cast<Eigen::Index>(u);
    dist(ui, ui) = 0.0;
    for (const Edge& e : g.neighbors(u)) dist(static_cast<Eigen::Index>(e.to), ui) = e.weight;
  }
  // Floyd-Warshall, one column at a time.
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::VectorXd via = dist.col(k);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double dkj = dist(k, j);
      if (dkj == inf || j == k) continue;
      dist.col(j) = dist.col(j).cwiseMin(via.array().matrix() + Eigen::VectorXd::Constant(n, dkj));
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double m = std::min(dist(i, j), dist(j, i));
      dist(i, j) = m;
      dist(j, i) = m;
    }
  }
  return dist;
}

namespace {

struct Eigenpair {
  double value;
  Eigen::VectorXd vector;
};

// Largest algebraic eigenpair of a symmetric matrix. Power iteration settles
// quickly when the leading eigenvalue dominates, which is the usual case for
// points near a curve; otherwise a dense solver takes over.
Eigenpair top_eigenpair(const Eigen::MatrixXd& m) {
  const auto n = m.rows();
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(n, 1.0, 2.0);
  v.normalize();
  double lambda = 0.0;
  for (int iter = 0; iter < 2000; ++iter) {
    const Eigen::VectorXd w = m * v;
    lambda = v.dot(w);
    const double residual = (w - lambda * v).norm();
    const double wn = w.norm();
    if (!(wn > 0.0)) break;
    if (residual <= 1e-12 * wn && lambda > 0.0) return {lambda, v};
    v = w / wn;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.info() != Eigen::Success) throw DegenerateSpectrum("eigen-decomposition failed");
  return {eig.eigenvalues()(n - 1), eig.eigenvectors().col(n - 1)};
}

}  // namespace

std::vector<double> classical_mds_1d(const Eigen::MatrixXd& dist) {
  const auto n = dist.rows();
  if (n != dist.cols() || n < 2) throw InvalidArgument("MDS needs a square matrix of size >= 2");
  if (!dist.allFinite()) throw InvalidArgument("MDS distance matrix has non-finite entries");
  const double scale = std::max(1.0, dist.cwiseAbs().maxCoeff());
  if ((dist - dist.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw InvalidArgument("MDS distance matrix is not symmetric");
  }

  const Eigen::MatrixXd gram = -0.5 * double_center(dist.cwiseProduct(dist));
  const auto [lambda, vec] = top_eigenpair(gram);
  if (!(lambda > 1e-12)) {
    throw DegenerateSpectrum(fmt::format("top eigenvalue {} is not positive", lambda));
  }

  Eigen::VectorXd coord = std::sqrt(lambda) * vec;
  coord.array() -= coord.mean();
  if (coord(0) < 0.0) coord = -coord;
  return {coord.data(), coord.data() + n};
}

Embedding isomap_embed(const BivariateDataset& d, const EmbeddingConfig& cfg) {
  cfg.validate();
  const std::size_t n = d.size();
  std::size_t k = cfg.k_neighbors.value_or(default_neighbors(n));
  if (n < k + 1) {
    throw TooFewPoints(fmt::format("Isomap with k={} needs at least {} points, got {}", k, k + 1, n));
  }

  std::vector<Point2> points(n);
  for (std::size_t i = 0; i < n; ++i) points[i] = {d.a()[i], d.b()[i]};

  Graph g = knn_graph(points, k);
  auto labels = g.components();
  auto connected = [&] {
    return std::all_of(labels.begin(), labels.end(), [](std::size_t l) { return l == 0; });
  };

  std::vector<std::size_t> kept(n);
  std::iota(kept.begin(), kept.end(), std::size_t{0});

  if (cfg.disconnected_policy == DisconnectedPolicy::GrowK) {
    while (!connected() && k < n - 1) {
      k = std::min(2 * k, n - 1);
      g = knn_graph(points, k);
      labels = g.components();
    }
  } else if (!connected()) {
    const std::size_t count = *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<std::size_t> sizes(count, 0);
    for (std::size_t l : labels) ++sizes[l];
    const auto largest = static_cast<std::size_t>(
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    kept.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] == largest) kept.push_back(i);
    }
    if (kept.size() < 2) throw TooFewPoints("largest component has fewer than 2 points");
    Graph induced(kept.size());
    std::vector<std::size_t> position(n, n);
    for (std::size_t i = 0; i < kept.size(); ++i) position[kept[i]] = i;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      for (const Edge& e : g.neighbors(kept[i])) {
        if (position[e.to] < n) induced.add_edge(i, position[e.to], e.weight);
      }
    }
    g = std::move(induced);
  }

  Embedding out;
  out.t = classical_mds_1d(geodesic_distances(g));
  out.kept_indices = std::move(kept);
  out.k_used = k;
  return out;
}

}  // namespace confound
