#include "grade/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace grade {

int Graph::num_classes() const {
  if (!labels || labels->size() == 0) return 0;
  return labels->maxCoeff() + 1;
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(num_nodes, 0);
  for (const auto& [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

std::vector<std::vector<int>> Graph::adjacency_list() const {
  std::vector<std::vector<int>> adj(num_nodes);
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  return adj;
}

Graph build_graph(int num_nodes, const std::vector<std::pair<int, int>>& edges,
                  const Eigen::MatrixXd& features,
                  const std::optional<Eigen::VectorXi>& labels) {
  if (num_nodes < 1) throw std::invalid_argument("build_graph: need at least one node");

  Graph g;
  g.num_nodes = num_nodes;

  g.edges.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    const std::string edge_str = "(" + std::to_string(a) + "," + std::to_string(b) + ")";
    if (a < 0 || b < 0 || a >= num_nodes || b >= num_nodes)
      throw std::invalid_argument("build_graph: edge " + edge_str +
                                  " out of range for " + std::to_string(num_nodes) + " nodes");
    if (a == b)
      throw std::invalid_argument("build_graph: self-loop " + edge_str + " not allowed");
    g.edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());

  if (features.size() == 0) {
    g.features.resize(num_nodes, 0);
  } else {
    if (features.rows() != num_nodes)
      throw std::invalid_argument("build_graph: feature rows (" +
                                  std::to_string(features.rows()) +
                                  ") do not match node count (" +
                                  std::to_string(num_nodes) + ")");
    g.features = features;
  }

  if (labels) {
    if (labels->size() != num_nodes)
      throw std::invalid_argument("build_graph: label count (" +
                                  std::to_string(labels->size()) +
                                  ") does not match node count (" +
                                  std::to_string(num_nodes) + ")");
    if (labels->size() > 0 && labels->minCoeff() < 0)
      throw std::invalid_argument("build_graph: negative class label");
    g.labels = *labels;
  }

  return g;
}

NormalizedAdjacency renormalized_adjacency(const Graph& g) {
  const std::vector<int> deg = g.degrees();

  NormalizedAdjacency out;
  out.num_nodes = g.num_nodes;
  out.triples.reserve(g.num_nodes + 2 * g.edges.size());

  // Entry (u,v) = 1 / sqrt((deg(u)+1)(deg(v)+1)). The product under a single
  // sqrt keeps the value bit-identical for (u,v) and (v,u), and makes the
  // diagonal exactly 1/(deg+1) since sqrt of a perfect square is exact.
  for (int v = 0; v < g.num_nodes; ++v) {
    out.triples.push_back({v, v, 1.0 / static_cast<double>(deg[v] + 1)});
  }
  for (const auto& [u, v] : g.edges) {
    const double w =
        1.0 / std::sqrt(static_cast<double>(deg[u] + 1) * static_cast<double>(deg[v] + 1));
    out.triples.push_back({u, v, w});
    out.triples.push_back({v, u, w});
  }
  std::sort(out.triples.begin(), out.triples.end(),
            [](const NormalizedAdjacency::Triple& a, const NormalizedAdjacency::Triple& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(out.triples.size());
  for (const auto& t : out.triples) trips.emplace_back(t.row, t.col, t.value);
  out.matrix.resize(g.num_nodes, g.num_nodes);
  out.matrix.setFromTriplets(trips.begin(), trips.end());

  return out;
}

Eigen::MatrixXd degree_one_hot(const Graph& g, int max_degree) {
  if (max_degree < 0) throw std::invalid_argument("degree_one_hot: negative max_degree");
  const std::vector<int> deg = g.degrees();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g.num_nodes, max_degree + 1);
  for (int v = 0; v < g.num_nodes; ++v) {
    out(v, std::min(deg[v], max_degree)) = 1.0;
  }
  return out;
}

}  // namespace grade
