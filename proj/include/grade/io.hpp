#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grade/graph.hpp"

namespace grade {

enum class LabelMode { None, ClassIndex, Real };

// Edge file: one "src,dst" pair per line, optional first line "#nodes=<n>".
// Without the header the node count is max index + 1. Feature file: one CSV
// row of doubles per node. Label file: one token per line, parsed per mode.
// Graphs loaded without a feature file get degree one-hot features
// (fallback_max_degree bins + clip).
Graph load_graph_csv(const std::string& edge_path,
                     const std::optional<std::string>& feature_path,
                     const std::optional<std::string>& label_path,
                     LabelMode label_mode = LabelMode::ClassIndex,
                     int fallback_max_degree = 32);

void save_edges_csv(const std::string& path, const Graph& g);
void save_features_csv(const std::string& path, const Graph& g);
void save_labels(const std::string& path, const Graph& g);

// "user_id,item_id" per line; external ids are arbitrary non-negative ints.
// Users and items are indexed by sorted external id; interaction order
// follows the file (first occurrence wins for duplicates).
struct InteractionData {
  int num_users = 0;
  int num_items = 0;
  std::vector<long long> user_ids;  // index -> external id
  std::vector<long long> item_ids;
  std::vector<std::pair<int, int>> interactions;  // (user index, item index)
};

InteractionData load_interactions_csv(const std::string& path);

// One non-empty token per line (raw string labels for the kernel tools).
std::vector<std::string> load_token_lines(const std::string& path);

// Bipartite user/item graph: nodes 0..U-1 are users, U..U+I-1 items, one
// edge per interaction, degree one-hot features, roles set.
Graph bipartite_graph(const InteractionData& data, int max_degree);

}  // namespace grade
