#pragma once

#include <cstdint>
#include <vector>

#include "grade/graph.hpp"
#include "grade/objective.hpp"

namespace grade {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct TrainConfig {
  double lambda = 0.02;
  int epochs = 100;
  double learning_rate = 0.01;
  AdamConfig adam;

  BaseKind base = BaseKind::Mmd;
  MmdEstimator estimator = MmdEstimator::Biased;
  GsdVariant variant = GsdVariant::Plain;

  int depth = 2;    // number of GCN layers = number of relabeling rounds
  int hidden = 16;  // width of every GCN layer
  std::vector<int> head_hidden;             // classifier hidden widths (empty = linear)
  std::vector<int> link_head_hidden = {16};

  bool regression = false;          // node task: MSE on real targets instead of CE
  int negatives_per_positive = 4;   // link task
  int max_degree = 32;              // degree one-hot width (degree variant, featurizers)

  // Rows per side used by the base discrepancy; larger sides are subsampled
  // per epoch from the "gsd-sample" stream. 0 disables the cap.
  int gsd_sample_cap = 1024;

  std::uint64_t seed = 0;
};

struct EpochStats {
  double task_loss = 0.0;
  double gsd = 0.0;
  double total = 0.0;
  std::vector<double> gsd_per_depth;
};

struct TrainedModel {
  ModelParams params;
  std::vector<EpochStats> history;  // losses at the start of each epoch
};

// Adam with bias correction over the flat parameter vector.
struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long step = 0;
};

AdamState make_adam_state(const ModelParams& params);
void optimizer_step(ModelParams& params, const ModelParams& gradients, AdamState& state,
                    double learning_rate, const AdamConfig& cfg);

// Node classification / regression on the labeled source, aligned to the
// unlabeled target by the depth-averaged base discrepancy. lambda = 0
// reduces to source-only training and never touches the target graph.
TrainedModel train_grade_n(const Graph& source, const Graph& target, const TrainConfig& cfg);

// Link prediction over two bipartite interaction graphs with a shared
// encoder and a shared link head; per-epoch sampled negatives on both sides.
TrainedModel train_grade_r(const Graph& source, const Graph& target, const TrainConfig& cfg);

// One-hot argmax predictions on the target; ties pick the smallest class.
Eigen::MatrixXd pseudo_label_one_hot(const ModelParams& params, const NormalizedAdjacency& adj,
                                     const Eigen::MatrixXd& features, int num_classes);

Eigen::VectorXi pseudo_labels(const TrainedModel& model, const Graph& target);

}  // namespace grade
