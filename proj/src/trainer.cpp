#include "grade/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "grade/rng.hpp"

namespace grade {

AdamState make_adam_state(const ModelParams& params) {
  AdamState st;
  const Eigen::Index n = static_cast<Eigen::Index>(params.flat_size());
  st.m = Eigen::VectorXd::Zero(n);
  st.v = Eigen::VectorXd::Zero(n);
  return st;
}

void optimizer_step(ModelParams& params, const ModelParams& gradients, AdamState& state,
                    double learning_rate, const AdamConfig& cfg) {
  const std::size_t n = params.flat_size();
  if (gradients.flat_size() != n)
    throw std::invalid_argument("optimizer_step: gradient size mismatch");
  if (static_cast<std::size_t>(state.m.size()) != n)
    throw std::invalid_argument("optimizer_step: state size mismatch");

  state.step += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));

  for (std::size_t i = 0; i < n; ++i) {
    const double g = gradients.flat_get(i);
    double& m = state.m(static_cast<Eigen::Index>(i));
    double& v = state.v(static_cast<Eigen::Index>(i));
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g;
    const double update = learning_rate * (m / bc1) / (std::sqrt(v / bc2) + cfg.epsilon);
    params.flat_set(i, params.flat_get(i) - update);
  }
}

namespace {

void check_common(const Graph& source, const Graph& target, const TrainConfig& cfg) {
  if (cfg.depth < 1) throw std::invalid_argument("train: depth must be >= 1");
  if (cfg.hidden < 1) throw std::invalid_argument("train: hidden width must be >= 1");
  if (cfg.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  if (cfg.lambda < 0.0) throw std::invalid_argument("train: negative lambda");
  if (source.feature_dim() != target.feature_dim())
    throw std::invalid_argument("train: feature dims differ (" +
                                std::to_string(source.feature_dim()) + " vs " +
                                std::to_string(target.feature_dim()) + "); the encoder is shared");
  if (source.feature_dim() == 0) throw std::invalid_argument("train: graphs need features");
}

std::vector<int> subsample_rows(int n, int cap, RngStream& rng) {
  if (cap <= 0 || n <= cap) return {};  // empty = use all rows
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  for (int i = 0; i < cap; ++i) std::swap(idx[i], idx[rng.uniform_int(i, n - 1)]);
  idx.resize(cap);
  return idx;
}

Eigen::MatrixXd labels_one_hot(const Eigen::VectorXi& y, int num_classes) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(y.size(), num_classes);
  for (Eigen::Index i = 0; i < y.size(); ++i) out(i, y(i)) = 1.0;
  return out;
}

EpochStats to_stats(const ObjectiveEval& eval) {
  EpochStats st;
  st.task_loss = eval.task_loss;
  st.gsd = eval.gsd_value;
  st.total = eval.total;
  st.gsd_per_depth = eval.gsd_per_depth;
  return st;
}

}  // namespace

TrainedModel train_grade_n(const Graph& source, const Graph& target, const TrainConfig& cfg) {
  check_common(source, target, cfg);
  if (cfg.regression) {
    if (!source.targets) throw std::invalid_argument("train_grade_n: source has no targets");
    if (cfg.variant == GsdVariant::Label)
      throw std::invalid_argument("train_grade_n: label variant needs a classifier, not regression");
  } else {
    if (!source.labels) throw std::invalid_argument("train_grade_n: source has no labels");
  }

  const int num_classes = cfg.regression ? 1 : source.num_classes();
  std::vector<int> gcn_dims{source.feature_dim()};
  for (int l = 0; l < cfg.depth; ++l) gcn_dims.push_back(cfg.hidden);
  std::vector<int> head_dims{cfg.hidden};
  for (int h : cfg.head_hidden) head_dims.push_back(h);
  head_dims.push_back(num_classes);

  TrainedModel model;
  model.params = init_params(gcn_dims, head_dims, cfg.seed);
  AdamState adam = make_adam_state(model.params);

  const NormalizedAdjacency adj_s = renormalized_adjacency(source);
  NormalizedAdjacency adj_t;
  if (cfg.lambda != 0.0) adj_t = renormalized_adjacency(target);

  ObjectiveSpec spec;
  spec.task = cfg.regression ? TaskKind::NodeRegress : TaskKind::NodeClass;
  spec.adj_source = &adj_s;
  spec.x_source = &source.features;
  if (cfg.regression)
    spec.regress_targets = &*source.targets;
  else
    spec.class_labels = &*source.labels;
  spec.gsd.lambda = cfg.lambda;
  spec.gsd.base = cfg.base;
  spec.gsd.estimator = cfg.estimator;
  if (cfg.lambda != 0.0) {
    spec.adj_target = &adj_t;
    spec.x_target = &target.features;
    if (cfg.variant == GsdVariant::Degree) {
      spec.gsd.extra_source = degree_one_hot(source, cfg.max_degree);
      spec.gsd.extra_target = degree_one_hot(target, cfg.max_degree);
    } else if (cfg.variant == GsdVariant::Label) {
      spec.gsd.extra_source = labels_one_hot(*source.labels, num_classes);
    }
  }

  RngStream sample_rng(cfg.seed, "gsd-sample");
  ModelParams grads = model.params.zeros_like();

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.lambda != 0.0) {
      if (cfg.variant == GsdVariant::Label)
        spec.gsd.extra_target =
            pseudo_label_one_hot(model.params, adj_t, target.features, num_classes);
      spec.gsd.rows_source = subsample_rows(source.num_nodes, cfg.gsd_sample_cap, sample_rng);
      spec.gsd.rows_target = subsample_rows(target.num_nodes, cfg.gsd_sample_cap, sample_rng);
    }
    const ObjectiveEval eval = loss_and_gradients(spec, model.params, &grads);
    model.history.push_back(to_stats(eval));
    optimizer_step(model.params, grads, adam, cfg.learning_rate, cfg.adam);
  }
  return model;
}

namespace {

// Positives per user plus the user-major edge list, validated bipartite.
struct BipartiteIndex {
  std::vector<std::pair<int, int>> positives;  // (user, item)
  std::vector<std::set<int>> user_items;
  std::vector<int> items;
};

BipartiteIndex index_bipartite(const Graph& g, const char* which) {
  if (static_cast<int>(g.roles.size()) != g.num_nodes)
    throw std::invalid_argument(std::string("train_grade_r: ") + which +
                                " graph has no user/item roles");
  BipartiteIndex idx;
  idx.user_items.resize(g.num_nodes);
  for (int v = 0; v < g.num_nodes; ++v)
    if (g.roles[v] == NodeRole::Item) idx.items.push_back(v);
  for (const auto& [a, b] : g.edges) {
    const bool a_user = g.roles[a] == NodeRole::User;
    const bool b_user = g.roles[b] == NodeRole::User;
    if (a_user == b_user)
      throw std::invalid_argument(std::string("train_grade_r: ") + which +
                                  " graph is not bipartite at edge (" + std::to_string(a) + "," +
                                  std::to_string(b) + ")");
    const int u = a_user ? a : b;
    const int it = a_user ? b : a;
    idx.positives.emplace_back(u, it);
    idx.user_items[u].insert(it);
  }
  return idx;
}

std::vector<LinkExample> sample_examples(const BipartiteIndex& idx, int negatives_per_positive,
                                         RngStream& rng) {
  std::vector<LinkExample> out;
  out.reserve(idx.positives.size() * (1 + negatives_per_positive));
  const int n_items = static_cast<int>(idx.items.size());
  for (const auto& [u, it] : idx.positives) {
    out.push_back({u, it, 1.0});
    if (static_cast<int>(idx.user_items[u].size()) >= n_items) continue;  // nothing to sample
    for (int k = 0; k < negatives_per_positive; ++k) {
      for (int attempt = 0; attempt < 1000; ++attempt) {
        const int cand = idx.items[rng.uniform_int(0, n_items - 1)];
        if (!idx.user_items[u].count(cand)) {
          out.push_back({u, cand, 0.0});
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace

TrainedModel train_grade_r(const Graph& source, const Graph& target, const TrainConfig& cfg) {
  check_common(source, target, cfg);
  if (cfg.variant == GsdVariant::Label)
    throw std::invalid_argument("train_grade_r: label variant is not defined for the link task");
  if (cfg.negatives_per_positive < 0)
    throw std::invalid_argument("train_grade_r: negative negatives_per_positive");

  const BipartiteIndex idx_s = index_bipartite(source, "source");
  const BipartiteIndex idx_t = index_bipartite(target, "target");
  if (idx_s.positives.empty())
    throw std::invalid_argument("train_grade_r: source graph has no positives");

  std::vector<int> gcn_dims{source.feature_dim()};
  for (int l = 0; l < cfg.depth; ++l) gcn_dims.push_back(cfg.hidden);
  std::vector<int> head_dims{2 * cfg.hidden};
  for (int h : cfg.link_head_hidden) head_dims.push_back(h);
  head_dims.push_back(1);

  TrainedModel model;
  model.params = init_params(gcn_dims, head_dims, cfg.seed);
  AdamState adam = make_adam_state(model.params);

  const NormalizedAdjacency adj_s = renormalized_adjacency(source);
  const NormalizedAdjacency adj_t = renormalized_adjacency(target);

  ObjectiveSpec spec;
  spec.task = TaskKind::Link;
  spec.adj_source = &adj_s;
  spec.adj_target = &adj_t;
  spec.x_source = &source.features;
  spec.x_target = &target.features;
  spec.gsd.lambda = cfg.lambda;
  spec.gsd.base = cfg.base;
  spec.gsd.estimator = cfg.estimator;
  if (cfg.lambda != 0.0 && cfg.variant == GsdVariant::Degree) {
    spec.gsd.extra_source = degree_one_hot(source, cfg.max_degree);
    spec.gsd.extra_target = degree_one_hot(target, cfg.max_degree);
  }

  RngStream neg_rng(cfg.seed, "negatives");
  RngStream sample_rng(cfg.seed, "gsd-sample");
  ModelParams grads = model.params.zeros_like();

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    spec.links_source = sample_examples(idx_s, cfg.negatives_per_positive, neg_rng);
    spec.links_target = sample_examples(idx_t, cfg.negatives_per_positive, neg_rng);
    if (cfg.lambda != 0.0) {
      spec.gsd.rows_source = subsample_rows(source.num_nodes, cfg.gsd_sample_cap, sample_rng);
      spec.gsd.rows_target = subsample_rows(target.num_nodes, cfg.gsd_sample_cap, sample_rng);
    }
    const ObjectiveEval eval = loss_and_gradients(spec, model.params, &grads);
    model.history.push_back(to_stats(eval));
    optimizer_step(model.params, grads, adam, cfg.learning_rate, cfg.adam);
  }
  return model;
}

Eigen::MatrixXd pseudo_label_one_hot(const ModelParams& params, const NormalizedAdjacency& adj,
                                     const Eigen::MatrixXd& features, int num_classes) {
  const Eigen::VectorXi pred = predict_classes(adj, features, params);
  return labels_one_hot(pred, num_classes);
}

Eigen::VectorXi pseudo_labels(const TrainedModel& model, const Graph& target) {
  const NormalizedAdjacency adj = renormalized_adjacency(target);
  return predict_classes(adj, target.features, model.params);
}

}  // namespace grade
