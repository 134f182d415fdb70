#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "grade/io.hpp"
#include "grade/synth.hpp"
#include "grade/trainer.hpp"

using namespace grade;

namespace {

std::pair<Graph, Graph> small_pair(std::uint64_t seed) {
  SynthShiftConfig cfg;
  cfg.nodes_per_block = 10;
  cfg.num_blocks = 2;
  cfg.feature_dim = 4;
  cfg.intra_edge_prob = 0.4;
  cfg.inter_edge_prob = 0.05;
  cfg.target_mean_scale = 2.0;
  cfg.seed = seed;
  return synth_shift_pair(cfg);
}

TrainConfig small_train() {
  TrainConfig cfg;
  cfg.epochs = 15;
  cfg.depth = 2;
  cfg.hidden = 6;
  cfg.lambda = 0.05;
  cfg.seed = 4;
  return cfg;
}

InteractionData toy_interactions(int users, int items, int per_user) {
  InteractionData d;
  d.num_users = users;
  d.num_items = items;
  for (int u = 0; u < users; ++u) d.user_ids.push_back(u);
  for (int i = 0; i < items; ++i) d.item_ids.push_back(i);
  for (int u = 0; u < users; ++u)
    for (int k = 0; k < per_user; ++k) d.interactions.push_back({u, (u * 3 + k * 2) % items});
  return d;
}

}  // namespace

TEST_CASE("adam's first step has magnitude close to the learning rate") {
  ModelParams p;
  p.gcn_weights = {Eigen::MatrixXd::Zero(1, 1)};
  ModelParams g = p.zeros_like();
  g.gcn_weights[0](0, 0) = 2.5;
  AdamState state = make_adam_state(p);
  optimizer_step(p, g, state, 0.01, AdamConfig{});
  CHECK(p.gcn_weights[0](0, 0) == doctest::Approx(-0.01).epsilon(1e-6));
}

TEST_CASE("training is deterministic in the seed") {
  const auto [s, t] = small_pair(2);
  const TrainConfig cfg = small_train();
  const TrainedModel a = train_grade_n(s, t, cfg);
  const TrainedModel b = train_grade_n(s, t, cfg);
  REQUIRE(a.params.flat_size() == b.params.flat_size());
  for (int i = 0; i < a.params.flat_size(); ++i)
    CHECK(a.params.flat_get(i) == b.params.flat_get(i));
  REQUIRE(a.history.size() == b.history.size());
  for (size_t e = 0; e < a.history.size(); ++e) CHECK(a.history[e].total == b.history[e].total);
}

TEST_CASE("the alignment term changes the trained parameters") {
  const auto [s, t] = small_pair(2);
  TrainConfig cfg = small_train();
  const TrainedModel with = train_grade_n(s, t, cfg);
  cfg.lambda = 0.0;
  const TrainedModel without = train_grade_n(s, t, cfg);
  double diff = 0.0;
  for (int i = 0; i < with.params.flat_size(); ++i)
    diff += std::abs(with.params.flat_get(i) - without.params.flat_get(i));
  CHECK(diff > 0.0);
}

TEST_CASE("task loss decreases over training") {
  const auto [s, t] = small_pair(3);
  TrainConfig cfg = small_train();
  cfg.epochs = 200;
  const TrainedModel m = train_grade_n(s, t, cfg);
  CHECK(m.history.back().task_loss < 0.5 * m.history.front().task_loss);
}

TEST_CASE("epoch history records the regularized total") {
  const auto [s, t] = small_pair(2);
  TrainConfig cfg = small_train();
  cfg.epochs = 3;
  const TrainedModel m = train_grade_n(s, t, cfg);
  REQUIRE(m.history.size() == 3);
  for (const EpochStats& e : m.history) {
    CHECK(e.gsd_per_depth.size() == 3);
    double mean = 0.0;
    for (double v : e.gsd_per_depth) mean += v;
    mean /= 3.0;
    CHECK(e.total == doctest::Approx(e.task_loss + cfg.lambda * mean).epsilon(1e-12));
  }
}

TEST_CASE("degree and label variants train") {
  const auto [s, t] = small_pair(5);
  TrainConfig cfg = small_train();
  cfg.epochs = 4;
  cfg.variant = GsdVariant::Degree;
  CHECK_NOTHROW(train_grade_n(s, t, cfg));
  cfg.variant = GsdVariant::Label;
  CHECK_NOTHROW(train_grade_n(s, t, cfg));
}

TEST_CASE("regression training works on real targets") {
  auto [s, t] = small_pair(6);
  Eigen::VectorXd targets(s.num_nodes);
  for (int i = 0; i < s.num_nodes; ++i) targets(i) = s.features(i, 0) + 0.5;
  s.targets = targets;
  s.labels.reset();
  TrainConfig cfg = small_train();
  cfg.regression = true;
  cfg.epochs = 30;
  const TrainedModel m = train_grade_n(s, t, cfg);
  CHECK(m.history.back().task_loss < m.history.front().task_loss);

  cfg.variant = GsdVariant::Label;
  CHECK_THROWS_AS(train_grade_n(s, t, cfg), std::invalid_argument);
}

TEST_CASE("training validates its configuration") {
  const auto [s, t] = small_pair(2);
  TrainConfig cfg = small_train();
  cfg.depth = 0;
  CHECK_THROWS_AS(train_grade_n(s, t, cfg), std::invalid_argument);
  cfg = small_train();
  cfg.lambda = -0.1;
  CHECK_THROWS_AS(train_grade_n(s, t, cfg), std::invalid_argument);
  cfg = small_train();
  cfg.epochs = 0;
  CHECK_THROWS_AS(train_grade_n(s, t, cfg), std::invalid_argument);

  // mismatched feature widths
  auto [s2, t2] = small_pair(2);
  Graph wide = t2;
  wide.features = Eigen::MatrixXd::Ones(t2.num_nodes, 7);
  CHECK_THROWS_AS(train_grade_n(s2, wide, small_train()), std::invalid_argument);
}

TEST_CASE("source labels are required for classification") {
  auto [s, t] = small_pair(2);
  s.labels.reset();
  CHECK_THROWS_AS(train_grade_n(s, t, small_train()), std::invalid_argument);
}

TEST_CASE("gsd row cap keeps training deterministic and bounded") {
  const auto [s, t] = small_pair(7);
  TrainConfig cfg = small_train();
  cfg.gsd_sample_cap = 8;  // smaller than either side
  cfg.epochs = 5;
  const TrainedModel a = train_grade_n(s, t, cfg);
  const TrainedModel b = train_grade_n(s, t, cfg);
  for (int i = 0; i < a.params.flat_size(); ++i)
    CHECK(a.params.flat_get(i) == b.params.flat_get(i));
}

TEST_CASE("link-prediction training runs on bipartite graphs") {
  const InteractionData src = toy_interactions(8, 10, 4);
  const InteractionData tgt = toy_interactions(6, 10, 3);
  const Graph s = bipartite_graph(src, 16);
  const Graph t = bipartite_graph(tgt, 16);
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.depth = 2;
  cfg.hidden = 5;
  cfg.lambda = 0.05;
  cfg.seed = 9;
  const TrainedModel a = train_grade_r(s, t, cfg);
  const TrainedModel b = train_grade_r(s, t, cfg);
  REQUIRE(a.history.size() == 10);
  for (int i = 0; i < a.params.flat_size(); ++i)
    CHECK(a.params.flat_get(i) == b.params.flat_get(i));
  CHECK(a.history.back().task_loss < a.history.front().task_loss);

  cfg.variant = GsdVariant::Label;
  CHECK_THROWS_AS(train_grade_r(s, t, cfg), std::invalid_argument);
}

TEST_CASE("link-prediction training rejects non-bipartite role layouts") {
  const auto [s, t] = small_pair(2);  // plain node graphs, no user/item roles
  TrainConfig cfg;
  cfg.epochs = 2;
  CHECK_THROWS_AS(train_grade_r(s, t, cfg), std::invalid_argument);
}

TEST_CASE("pseudo labels one-hot rows sum to one") {
  const auto [s, t] = small_pair(2);
  const TrainConfig cfg = small_train();
  const TrainedModel m = train_grade_n(s, t, cfg);
  const NormalizedAdjacency adj = renormalized_adjacency(t);
  const Eigen::MatrixXd onehot = pseudo_label_one_hot(m.params, adj, t.features, 2);
  CHECK(onehot.rows() == t.num_nodes);
  CHECK(onehot.cols() == 2);
  for (int i = 0; i < onehot.rows(); ++i) CHECK(onehot.row(i).sum() == 1.0);
}
