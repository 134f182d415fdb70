#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "grade/embedding.hpp"
#include "grade/graph.hpp"

namespace grade {

// All trainable tensors. Flat scalar addressing (used by gradient checks and
// checkpoints) walks GCN matrices in layer order, row-major within each
// matrix, then for every head layer its weight matrix followed by its bias.
struct ModelParams {
  std::vector<Eigen::MatrixXd> gcn_weights;   // W^m: d_{m-1} x d_m, no biases
  std::vector<Eigen::MatrixXd> head_weights;  // per layer: in x out
  std::vector<Eigen::VectorXd> head_biases;   // per layer: out

  std::size_t flat_size() const;
  double flat_get(std::size_t index) const;
  void flat_set(std::size_t index, double value);

  void set_zero();
  ModelParams zeros_like() const;

  std::vector<int> gcn_dims() const;   // [d_0, d_1, ..., d_M]
  std::vector<int> head_dims() const;  // [h_0, ..., h_K]
};

// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases, drawn
// from the "init" sub-stream of the given seed.
ModelParams init_params(const std::vector<int>& gcn_dims, const std::vector<int>& head_dims,
                        std::uint64_t seed);

// f_0 = features, f_m = relu(A_hat * f_{m-1} * W^m). The returned sequence
// has depth() == number of GCN layers.
SubtreeEmbeddingSequence gcn_forward(const NormalizedAdjacency& adj,
                                     const Eigen::MatrixXd& features, const ModelParams& params);

// MLP on rows of h: hidden layers ReLU, final layer linear, biases on every
// layer. For classification the rows are logits (softmax is applied by the
// loss, not here).
Eigen::MatrixXd classify_head(const Eigen::MatrixXd& h, const ModelParams& params);

// Same MLP applied to the concatenated pair embedding [f_u || f_v] (u first).
double link_logit(const Eigen::VectorXd& f_u, const Eigen::VectorXd& f_v,
                  const ModelParams& params);

}  // namespace grade
