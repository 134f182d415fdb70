#include "grade/gnn.hpp"

#include <cmath>
#include <stdexcept>

#include "grade/rng.hpp"

namespace grade {

std::size_t ModelParams::flat_size() const {
  std::size_t n = 0;
  for (const auto& w : gcn_weights) n += static_cast<std::size_t>(w.size());
  for (const auto& w : head_weights) n += static_cast<std::size_t>(w.size());
  for (const auto& b : head_biases) n += static_cast<std::size_t>(b.size());
  return n;
}

namespace {

// Maps a flat index to a scalar reference; shared by get and set.
template <typename Params>
auto& flat_ref(Params& p, std::size_t index) {
  for (auto& w : p.gcn_weights) {
    const std::size_t sz = static_cast<std::size_t>(w.size());
    if (index < sz)
      return w(static_cast<Eigen::Index>(index / w.cols()),
               static_cast<Eigen::Index>(index % w.cols()));
    index -= sz;
  }
  for (std::size_t layer = 0; layer < p.head_weights.size(); ++layer) {
    auto& w = p.head_weights[layer];
    const std::size_t wsz = static_cast<std::size_t>(w.size());
    if (index < wsz)
      return w(static_cast<Eigen::Index>(index / w.cols()),
               static_cast<Eigen::Index>(index % w.cols()));
    index -= wsz;
    auto& b = p.head_biases[layer];
    const std::size_t bsz = static_cast<std::size_t>(b.size());
    if (index < bsz) return b(static_cast<Eigen::Index>(index));
    index -= bsz;
  }
  throw std::out_of_range("ModelParams: flat index out of range");
}

}  // namespace

double ModelParams::flat_get(std::size_t index) const {
  return flat_ref(*this, index);
}

void ModelParams::flat_set(std::size_t index, double value) {
  flat_ref(*this, index) = value;
}

void ModelParams::set_zero() {
  for (auto& w : gcn_weights) w.setZero();
  for (auto& w : head_weights) w.setZero();
  for (auto& b : head_biases) b.setZero();
}

ModelParams ModelParams::zeros_like() const {
  ModelParams out = *this;
  out.set_zero();
  return out;
}

std::vector<int> ModelParams::gcn_dims() const {
  std::vector<int> dims;
  if (gcn_weights.empty()) return dims;
  dims.push_back(static_cast<int>(gcn_weights.front().rows()));
  for (const auto& w : gcn_weights) dims.push_back(static_cast<int>(w.cols()));
  return dims;
}

std::vector<int> ModelParams::head_dims() const {
  std::vector<int> dims;
  if (head_weights.empty()) return dims;
  dims.push_back(static_cast<int>(head_weights.front().rows()));
  for (const auto& w : head_weights) dims.push_back(static_cast<int>(w.cols()));
  return dims;
}

ModelParams init_params(const std::vector<int>& gcn_dims, const std::vector<int>& head_dims,
                        std::uint64_t seed) {
  if (gcn_dims.size() < 2) throw std::invalid_argument("init_params: need at least one GCN layer");
  if (head_dims.size() < 2) throw std::invalid_argument("init_params: need at least one head layer");
  for (int d : gcn_dims)
    if (d <= 0) throw std::invalid_argument("init_params: non-positive GCN width");
  for (int d : head_dims)
    if (d <= 0) throw std::invalid_argument("init_params: non-positive head width");

  RngStream rng(seed, "init");
  auto glorot = [&rng](int rows, int cols) {
    const double bound = std::sqrt(6.0 / (rows + cols));
    Eigen::MatrixXd w(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) w(i, j) = bound * (2.0 * rng.uniform() - 1.0);
    return w;
  };

  ModelParams p;
  for (size_t l = 0; l + 1 < gcn_dims.size(); ++l)
    p.gcn_weights.push_back(glorot(gcn_dims[l], gcn_dims[l + 1]));
  for (size_t l = 0; l + 1 < head_dims.size(); ++l) {
    p.head_weights.push_back(glorot(head_dims[l], head_dims[l + 1]));
    p.head_biases.push_back(Eigen::VectorXd::Zero(head_dims[l + 1]));
  }
  return p;
}

SubtreeEmbeddingSequence gcn_forward(const NormalizedAdjacency& adj,
                                     const Eigen::MatrixXd& features, const ModelParams& params) {
  if (features.rows() != adj.num_nodes)
    throw std::invalid_argument("gcn_forward: feature rows do not match adjacency size");
  if (!params.gcn_weights.empty() && params.gcn_weights.front().rows() != features.cols())
    throw std::invalid_argument("gcn_forward: feature dim " + std::to_string(features.cols()) +
                                " does not match W^1 input dim " +
                                std::to_string(params.gcn_weights.front().rows()));

  SubtreeEmbeddingSequence seq;
  seq.f.reserve(params.gcn_weights.size() + 1);
  seq.f.push_back(features);
  for (const auto& w : params.gcn_weights) {
    const Eigen::MatrixXd z = adj.matrix * seq.f.back() * w;
    seq.f.push_back(z.cwiseMax(0.0));
  }
  return seq;
}

namespace {

Eigen::MatrixXd mlp_forward(const Eigen::MatrixXd& input, const ModelParams& params) {
  if (params.head_weights.empty()) throw std::invalid_argument("head: no layers");
  if (input.cols() != params.head_weights.front().rows())
    throw std::invalid_argument("head: input dim " + std::to_string(input.cols()) +
                                " does not match layer dim " +
                                std::to_string(params.head_weights.front().rows()));
  Eigen::MatrixXd a = input;
  for (size_t l = 0; l < params.head_weights.size(); ++l) {
    Eigen::MatrixXd z =
        (a * params.head_weights[l]).rowwise() + params.head_biases[l].transpose();
    a = l + 1 < params.head_weights.size() ? z.cwiseMax(0.0) : std::move(z);
  }
  return a;
}

}  // namespace

Eigen::MatrixXd classify_head(const Eigen::MatrixXd& h, const ModelParams& params) {
  return mlp_forward(h, params);
}

double link_logit(const Eigen::VectorXd& f_u, const Eigen::VectorXd& f_v,
                  const ModelParams& params) {
  Eigen::MatrixXd pair(1, f_u.size() + f_v.size());
  pair << f_u.transpose(), f_v.transpose();
  const Eigen::MatrixXd out = mlp_forward(pair, params);
  if (out.cols() != 1) throw std::invalid_argument("link_logit: head output must be scalar");
  return out(0, 0);
}

}  // namespace grade
