#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "grade/graph.hpp"
#include "grade/synth.hpp"

using namespace grade;

TEST_CASE("build_graph canonicalizes, dedups and validates edges") {
  const Graph g = build_graph(4, {{1, 0}, {0, 1}, {2, 3}});
  CHECK(g.num_nodes == 4);
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0] == std::pair<int, int>{0, 1});
  CHECK(g.edges[1] == std::pair<int, int>{2, 3});

  CHECK_THROWS_AS(build_graph(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(build_graph(3, {{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(build_graph(0, {}), std::invalid_argument);
}

TEST_CASE("degrees and adjacency list agree") {
  const Graph g = build_graph(4, {{0, 1}, {0, 2}, {0, 3}});
  const auto deg = g.degrees();
  CHECK(deg[0] == 3);
  CHECK(deg[1] == 1);
  const auto adj = g.adjacency_list();
  CHECK(adj[0].size() == 3);
  CHECK(adj[3] == std::vector<int>{0});
}

// With A_hat = D^{-1/2} (A + I) D^{-1/2} every entry is
// 1/sqrt((deg(u)+1)(deg(v)+1)); the cases below are exact in floating point.
TEST_CASE("renormalized adjacency of a triangle is constant one third") {
  const Graph g = build_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  const NormalizedAdjacency adj = renormalized_adjacency(g);
  const Eigen::MatrixXd dense = Eigen::MatrixXd(adj.matrix);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(dense(i, j) == 1.0 / 3.0);
}

TEST_CASE("renormalized adjacency of a single edge is constant one half") {
  const Graph g = build_graph(2, {{0, 1}});
  const Eigen::MatrixXd dense = Eigen::MatrixXd(renormalized_adjacency(g).matrix);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(dense(i, j) == 0.5);
}

TEST_CASE("renormalized adjacency diagonal is exactly 1/(deg+1)") {
  const Graph g = build_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}});
  const Eigen::MatrixXd dense = Eigen::MatrixXd(renormalized_adjacency(g).matrix);
  const auto deg = g.degrees();
  for (int i = 0; i < 5; ++i) CHECK(dense(i, i) == 1.0 / (deg[i] + 1));
}

TEST_CASE("renormalized adjacency is bitwise symmetric") {
  const Graph g = synth_bench_graph(200, 9);
  const Eigen::MatrixXd dense = Eigen::MatrixXd(renormalized_adjacency(g).matrix);
  for (int i = 0; i < g.num_nodes; ++i)
    for (int j = i + 1; j < g.num_nodes; ++j) CHECK(dense(i, j) == dense(j, i));
}

TEST_CASE("isolated node row reduces to the self loop") {
  const Graph g = build_graph(2, {});
  const Eigen::MatrixXd dense = Eigen::MatrixXd(renormalized_adjacency(g).matrix);
  CHECK(dense(0, 0) == 1.0);
  CHECK(dense(0, 1) == 0.0);
}

TEST_CASE("degree one-hot clips at the cap") {
  const Graph g = build_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  const Eigen::MatrixXd x = degree_one_hot(g, 2);
  CHECK(x.cols() == 3);
  CHECK(x(0, 2) == 1.0);  // degree 4 clipped to bucket 2
  CHECK(x(1, 1) == 1.0);
  CHECK(x.row(0).sum() == 1.0);
}

TEST_CASE("synthetic pair shares block structure but shifts feature scale") {
  SynthShiftConfig cfg;
  cfg.nodes_per_block = 30;
  cfg.num_blocks = 2;
  cfg.feature_dim = 4;
  cfg.source_mean_scale = 1.0;
  cfg.target_mean_scale = 3.0;
  cfg.seed = 5;
  const auto [s, t] = synth_shift_pair(cfg);
  CHECK(s.num_nodes == 60);
  CHECK(t.num_nodes == 60);
  CHECK(s.feature_dim() == 4);
  REQUIRE(s.labels.has_value());
  CHECK((*s.labels)(0) == 0);
  CHECK((*s.labels)(59) == 1);
  // the same seed regenerates the same pair
  const auto [s2, t2] = synth_shift_pair(cfg);
  CHECK(s.edges == s2.edges);
  CHECK((s.features - s2.features).norm() == 0.0);
  CHECK(t.edges == t2.edges);
}

TEST_CASE("bench graph has exactly 2n distinct edges") {
  const Graph g = synth_bench_graph(100, 3);
  CHECK(g.num_nodes == 100);
  CHECK(g.edges.size() == 200);
  CHECK(g.feature_dim() == 16);
  CHECK_THROWS_AS(synth_bench_graph(2, 0), std::invalid_argument);
}
