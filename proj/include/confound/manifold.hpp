#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "confound/data.hpp"

namespace confound {

enum class DisconnectedPolicy { GrowK, LargestComponent };

struct EmbeddingConfig {
  // nullopt selects default_neighbors(n) for the dataset at hand.
  std::optional<std::size_t> k_neighbors;
  DisconnectedPolicy disconnected_policy = DisconnectedPolicy::GrowK;

  void validate() const;
};

/// max(10, ceil(0.04 n)).
std::size_t default_neighbors(std::size_t n) noexcept;

/// One-dimensional coordinate per kept sample.
struct Embedding {
  std::vector<double> t;
  std::vector<std::size_t> kept_indices;
  std::size_t k_used = 0;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Edge {
  std::size_t to = 0;
  double weight = 0.0;
};

/// Undirected weighted graph stored as sorted adjacency lists.
class Graph {
 public:
  explicit Graph(std::size_t n) : adjacency_(n) {}

  /// Adds the edge once in each direction; a repeated edge is ignored.
  void add_edge(std::size_t u, std::size_t v, double weight);

  std::size_t size() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept;
  std::span<const Edge> neighbors(std::size_t u) const { return adjacency_[u]; }
  bool has_edge(std::size_t u, std::size_t v) const;

  /// Connected-component label per node, labels numbered in order of the
  /// lowest node index they contain.
  std::vector<std::size_t> components() const;

 private:
  std::vector<std::vector<Edge>> adjacency_;
};

/// Symmetrized k-nearest-neighbor graph: i and j share an edge if either is
/// among the other's k nearest points. Equal distances break toward the
/// lower index. Throws TooFewPoints unless points.size() >= k + 1.
Graph knn_graph(std::span<const Point2> points, std::size_t k);

/// All-pairs shortest paths; disconnected pairs hold +infinity.
Eigen::MatrixXd geodesic_distances(const Graph& g);

/// Classical MDS onto one dimension: sqrt(lambda) v for the top eigenpair of
/// -1/2 J D^2 J. Output is centered and oriented so the first coordinate is
/// non-negative. Throws DegenerateSpectrum if lambda <= 1e-12.
std::vector<double> classical_mds_1d(const Eigen::MatrixXd& dist);

/// Isomap: kNN graph, geodesic distances, classical MDS.
Embedding isomap_embed(const BivariateDataset& d, const EmbeddingConfig& cfg);

}  // namespace confound
