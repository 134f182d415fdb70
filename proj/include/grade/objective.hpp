#pragma once

#include <vector>

#include "grade/discrepancy.hpp"
#include "grade/gnn.hpp"
#include "grade/graph.hpp"

namespace grade {

enum class TaskKind { NodeClass, NodeRegress, Link };
enum class BaseKind { Mmd, Coral };
enum class GsdVariant { Plain, Degree, Label };

// Alignment term of a training objective. extra_* carries the per-node
// one-hot block for the degree/label variants (empty = plain). rows_*
// restrict the base discrepancy to a row subsample (empty = every node).
// bandwidths, when non-empty, pin the per-depth MMD bandwidths; when empty
// each depth uses a fresh median, and the values used are reported back.
// Gradients always treat the bandwidth as a constant, so a pinned instance
// is exactly the function the analytic gradient describes.
struct GsdTerm {
  double lambda = 0.0;
  BaseKind base = BaseKind::Mmd;
  MmdEstimator estimator = MmdEstimator::Biased;
  Eigen::MatrixXd extra_source;
  Eigen::MatrixXd extra_target;
  std::vector<int> rows_source;
  std::vector<int> rows_target;
  std::vector<double> bandwidths;
};

struct LinkExample {
  int u = 0;
  int v = 0;
  double label = 0.0;  // 1 = observed edge, 0 = sampled non-edge
};

// A fully resolved objective: data, task, sampled link examples and the
// alignment term. Evaluating it twice with the same params is deterministic,
// which is what the finite-difference audit and the epoch log rely on.
struct ObjectiveSpec {
  TaskKind task = TaskKind::NodeClass;

  const NormalizedAdjacency* adj_source = nullptr;
  const NormalizedAdjacency* adj_target = nullptr;
  const Eigen::MatrixXd* x_source = nullptr;
  const Eigen::MatrixXd* x_target = nullptr;

  const Eigen::VectorXi* class_labels = nullptr;     // NodeClass, source
  const Eigen::VectorXd* regress_targets = nullptr;  // NodeRegress, source

  std::vector<LinkExample> links_source;  // Link task, both graphs
  std::vector<LinkExample> links_target;

  GsdTerm gsd;
};

struct ObjectiveEval {
  double total = 0.0;
  double task_loss = 0.0;
  double gsd_value = 0.0;               // depth mean, already in total via lambda
  std::vector<double> gsd_per_depth;    // raw base values (all zero when lambda == 0)
  std::vector<double> bandwidths_used;  // empty unless an MMD term ran
};

// Total loss and, when `gradients` is non-null, exact reverse-mode
// derivatives with respect to every parameter (accumulated into a zeroed
// copy). Throws on non-finite values, naming the term that overflowed.
// When lambda == 0 the target graph is never touched.
ObjectiveEval loss_and_gradients(const ObjectiveSpec& spec, const ModelParams& params,
                                 ModelParams* gradients);

Eigen::VectorXi predict_classes(const NormalizedAdjacency& adj, const Eigen::MatrixXd& features,
                                const ModelParams& params);

Eigen::VectorXd predict_values(const NormalizedAdjacency& adj, const Eigen::MatrixXd& features,
                               const ModelParams& params);

// Batch link logits on precomputed final-depth embeddings.
Eigen::VectorXd link_scores(const Eigen::MatrixXd& f_final,
                            const std::vector<std::pair<int, int>>& pairs,
                            const ModelParams& params);

}  // namespace grade
