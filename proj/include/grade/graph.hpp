#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <optional>
#include <utility>
#include <vector>

namespace grade {

enum class NodeRole { Plain, User, Item };

// Undirected simple attributed graph. Edges are kept canonically as
// (min, max) pairs, sorted and deduplicated. Self-loops are rejected at
// construction; the only self-weights in the system are the ones added by
// adjacency renormalization. Isolated nodes are legal.
struct Graph {
  int num_nodes = 0;
  std::vector<std::pair<int, int>> edges;
  Eigen::MatrixXd features;                // num_nodes x D, D may be 0
  std::optional<Eigen::VectorXi> labels;   // class indices in 0..C-1
  std::optional<Eigen::VectorXd> targets;  // regression targets
  std::vector<NodeRole> roles;             // empty means all Plain

  int feature_dim() const { return static_cast<int>(features.cols()); }
  int num_classes() const;  // 0 when unlabeled
  std::vector<int> degrees() const;
  std::vector<std::vector<int>> adjacency_list() const;  // sorted neighbor lists
};

// Validates indices, rejects self-loops (naming the offending edge), and
// deduplicates parallel / reversed duplicates. Pass an empty features matrix
// for featureless graphs; it is normalized to num_nodes x 0.
Graph build_graph(int num_nodes, const std::vector<std::pair<int, int>>& edges,
                  const Eigen::MatrixXd& features = {},
                  const std::optional<Eigen::VectorXi>& labels = std::nullopt);

// Symmetrically re-normalized adjacency with self-loops:
//   A_hat = D~^{-1/2} (A + I) D~^{-1/2},  D~ = diag(deg(v) + 1).
struct NormalizedAdjacency {
  struct Triple {
    int row;
    int col;
    double value;
  };
  int num_nodes = 0;
  std::vector<Triple> triples;          // sorted by (row, col)
  Eigen::SparseMatrix<double> matrix;   // same content, ready for products
};

NormalizedAdjacency renormalized_adjacency(const Graph& g);

// Row v = one-hot of min(deg(v), max_degree) over max_degree + 1 bins.
Eigen::MatrixXd degree_one_hot(const Graph& g, int max_degree);

}  // namespace grade
