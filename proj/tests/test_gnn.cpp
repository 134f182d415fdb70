#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "grade/checkpoint.hpp"
#include "grade/gnn.hpp"
#include "grade/graph.hpp"

using namespace grade;

TEST_CASE("forward pass on an isolated node applies relu after the self loop") {
  const Graph g = build_graph(1, {});
  Eigen::MatrixXd x(1, 2);
  x << 1.0, -1.0;
  ModelParams p;
  p.gcn_weights = {Eigen::MatrixXd::Identity(2, 2)};
  const SubtreeEmbeddingSequence seq = gcn_forward(renormalized_adjacency(g), x, p);
  REQUIRE(seq.depth() == 1);
  CHECK(seq.f[0](0, 0) == 1.0);
  CHECK(seq.f[0](0, 1) == -1.0);
  CHECK(seq.f[1](0, 0) == 1.0);
  CHECK(seq.f[1](0, 1) == 0.0);
}

TEST_CASE("forward pass on a single edge averages with weight one half") {
  const Graph g = build_graph(2, {{0, 1}});
  Eigen::MatrixXd x(2, 2);
  x << 2.0, 0.0, 0.0, 2.0;
  ModelParams p;
  p.gcn_weights = {Eigen::MatrixXd::Identity(2, 2)};
  const SubtreeEmbeddingSequence seq = gcn_forward(renormalized_adjacency(g), x, p);
  CHECK(seq.f[1](0, 0) == 1.0);
  CHECK(seq.f[1](0, 1) == 1.0);
  CHECK(seq.f[1](1, 0) == 1.0);
  CHECK(seq.f[1](1, 1) == 1.0);
}

TEST_CASE("initialization respects glorot bounds and zero biases") {
  const ModelParams p = init_params({8, 16, 16}, {16, 4}, 3);
  REQUIRE(p.gcn_weights.size() == 2);
  REQUIRE(p.head_weights.size() == 1);
  const double bound0 = std::sqrt(6.0 / (8 + 16));
  CHECK(p.gcn_weights[0].cwiseAbs().maxCoeff() <= bound0);
  CHECK(p.gcn_weights[0].cwiseAbs().maxCoeff() > 0.0);
  CHECK(p.head_biases[0].cwiseAbs().maxCoeff() == 0.0);
  // deterministic in the seed
  const ModelParams q = init_params({8, 16, 16}, {16, 4}, 3);
  CHECK((p.gcn_weights[1] - q.gcn_weights[1]).cwiseAbs().maxCoeff() == 0.0);
  const ModelParams r = init_params({8, 16, 16}, {16, 4}, 4);
  CHECK((p.gcn_weights[1] - r.gcn_weights[1]).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("flat addressing round-trips every parameter") {
  ModelParams p = init_params({3, 5}, {5, 7, 2}, 11);
  const int n = p.flat_size();
  CHECK(n == 3 * 5 + 5 * 7 + 7 + 7 * 2 + 2);
  for (int i = 0; i < n; ++i) p.flat_set(i, static_cast<double>(i));
  for (int i = 0; i < n; ++i) CHECK(p.flat_get(i) == static_cast<double>(i));
  CHECK(p.gcn_weights[0](0, 0) == 0.0);
  CHECK(p.gcn_weights[0](0, 1) == 1.0);  // row-major walk
}

TEST_CASE("classifier head computes logits for every node") {
  const Graph g = build_graph(2, {{0, 1}});
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(2, 3);
  ModelParams p = init_params({3, 4}, {4, 2}, 0);
  const SubtreeEmbeddingSequence seq = gcn_forward(renormalized_adjacency(g), x, p);
  const Eigen::MatrixXd logits = classify_head(seq.f.back(), p);
  CHECK(logits.rows() == 2);
  CHECK(logits.cols() == 2);
}

TEST_CASE("link head concatenates the two endpoints in order") {
  ModelParams p;
  p.gcn_weights = {};
  Eigen::MatrixXd w(4, 1);
  w << 1, 0, 0, 0;  // picks out the first coordinate of u
  p.head_weights = {w};
  p.head_biases = {Eigen::VectorXd::Zero(1)};
  Eigen::MatrixXd f(2, 2);
  f << 5.0, 1.0, 7.0, 2.0;
  CHECK(link_logit(f.row(0).transpose(), f.row(1).transpose(), p) == 5.0);
  CHECK(link_logit(f.row(1).transpose(), f.row(0).transpose(), p) == 7.0);
}

TEST_CASE("checkpoint round trip is bit exact") {
  const ModelParams p = init_params({6, 9, 9}, {18, 16, 1}, 99);
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "grade_test_checkpoint.txt";
  save_checkpoint(path.string(), p, 99);
  const Checkpoint cp = load_checkpoint(path.string());
  CHECK(cp.seed == 99);
  REQUIRE(cp.params.flat_size() == p.flat_size());
  for (int i = 0; i < p.flat_size(); ++i) CHECK(cp.params.flat_get(i) == p.flat_get(i));
  std::filesystem::remove(path);
}

TEST_CASE("checkpoint loader rejects a corrupt header") {
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "grade_test_checkpoint_bad.txt";
  {
    FILE* f = std::fopen(path.string().c_str(), "w");
    std::fputs("not-a-checkpoint\n", f);
    std::fclose(f);
  }
  CHECK_THROWS(load_checkpoint(path.string()));
  std::filesystem::remove(path);
}
