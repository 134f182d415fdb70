#pragma once

#include <Eigen/Dense>
#include <vector>

namespace grade {

// Depth-indexed node representations: f[0] is the raw input, f[m] the m-hop
// encoder output. All depths share the node dimension; widths may differ.
struct SubtreeEmbeddingSequence {
  std::vector<Eigen::MatrixXd> f;

  int depth() const { return static_cast<int>(f.size()) - 1; }
  int num_nodes() const { return f.empty() ? 0 : static_cast<int>(f[0].rows()); }
};

}  // namespace grade
