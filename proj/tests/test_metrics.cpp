#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "grade/metrics.hpp"
#include "grade/rng.hpp"

using namespace grade;

TEST_CASE("accuracy counts exact matches") {
  Eigen::VectorXi pred(4), truth(4);
  pred << 0, 1, 2, 1;
  truth << 0, 1, 1, 1;
  CHECK(accuracy(pred, truth) == 0.75);
  Eigen::VectorXi shorter(3);
  shorter << 0, 1, 2;
  CHECK_THROWS_AS(accuracy(pred, shorter), std::invalid_argument);
}

TEST_CASE("mae and r2 on a hand case") {
  Eigen::VectorXd pred(2), truth(2);
  pred << 1.0, 1.0;
  truth << 0.0, 2.0;
  const MaeR2 m = mae_r2(pred, truth);
  CHECK(m.mae == 1.0);
  CHECK(m.r2 == 0.0);  // predicting the mean

  Eigen::VectorXd exact = truth;
  const MaeR2 p = mae_r2(exact, truth);
  CHECK(p.mae == 0.0);
  CHECK(p.r2 == 1.0);

  Eigen::VectorXd constant(2);
  constant << 3.0, 3.0;
  CHECK_THROWS_AS(mae_r2(pred, constant), std::invalid_argument);
}

namespace {

UserCase make_case(int num_candidates, int positive_rank_target) {
  // candidate ids 0..n-1, scores descending by id, positive placed so that
  // its 1-based rank is positive_rank_target
  UserCase uc;
  for (int i = 0; i < num_candidates; ++i) {
    uc.candidate_ids.push_back(i);
    uc.scores.push_back(static_cast<double>(num_candidates - i));
  }
  uc.positive_index = positive_rank_target - 1;
  return uc;
}

}  // namespace

TEST_CASE("rank-1 positive scores perfectly") {
  RankedEval ev;
  ev.k = 10;
  ev.users = {make_case(20, 1)};
  const RankingMetrics m = rank_metrics(ev);
  CHECK(m.hit_rate == 1.0);
  CHECK(m.mrr == 1.0);
  CHECK(m.ndcg == 1.0);
}

TEST_CASE("rank-3 positive gives the closed-form values") {
  RankedEval ev;
  ev.k = 10;
  ev.users = {make_case(20, 3)};
  const RankingMetrics m = rank_metrics(ev);
  CHECK(m.hit_rate == 1.0);
  CHECK(m.mrr == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(m.ndcg == doctest::Approx(0.5).epsilon(1e-15));  // 1/log2(4)
}

TEST_CASE("positive outside the cutoff contributes zero") {
  RankedEval ev;
  ev.k = 10;
  ev.users = {make_case(20, 11)};
  const RankingMetrics m = rank_metrics(ev);
  CHECK(m.hit_rate == 0.0);
  CHECK(m.mrr == 0.0);
  CHECK(m.ndcg == 0.0);
}

TEST_CASE("metrics average over users") {
  RankedEval ev;
  ev.k = 10;
  ev.users = {make_case(20, 1), make_case(20, 11)};
  const RankingMetrics m = rank_metrics(ev);
  CHECK(m.hit_rate == 0.5);
  CHECK(m.mrr == 0.5);
  CHECK(m.ndcg == 0.5);
}

TEST_CASE("score ties break toward the smaller candidate id") {
  UserCase uc;
  uc.candidate_ids = {5, 9, 2};
  uc.scores = {1.0, 1.0, 1.0};
  uc.positive_index = 0;  // id 5: beaten only by tied id 2
  RankedEval ev;
  ev.k = 10;
  ev.users = {uc};
  const RankingMetrics m = rank_metrics(ev);
  CHECK(m.mrr == 0.5);  // rank 2
}

TEST_CASE("ranking rejects malformed cases") {
  UserCase dup;
  dup.candidate_ids = {1, 1, 2};
  dup.scores = {1.0, 2.0, 3.0};
  dup.positive_index = 0;
  RankedEval ev;
  ev.users = {dup};
  CHECK_THROWS_AS(rank_metrics(ev), std::invalid_argument);

  UserCase nan_case;
  nan_case.candidate_ids = {1, 2};
  nan_case.scores = {std::nan(""), 1.0};
  nan_case.positive_index = 0;
  ev.users = {nan_case};
  CHECK_THROWS_AS(rank_metrics(ev), std::invalid_argument);

  RankedEval empty;
  CHECK_THROWS_AS(rank_metrics(empty), std::invalid_argument);
}

TEST_CASE("ranks are invariant under monotone score transforms") {
  RngStream rng(55, "test");
  for (int trial = 0; trial < 20; ++trial) {
    UserCase uc;
    const int n = 30;
    for (int i = 0; i < n; ++i) {
      uc.candidate_ids.push_back(i);
      uc.scores.push_back(rng.normal());
    }
    uc.positive_index = rng.uniform_int(0, n - 1);
    UserCase warped = uc;
    for (double& s : warped.scores) s = std::exp(0.5 * s) + 2.0;
    RankedEval a, b;
    a.users = {uc};
    b.users = {warped};
    a.k = b.k = 10;
    const RankingMetrics ma = rank_metrics(a);
    const RankingMetrics mb = rank_metrics(b);
    CHECK(ma.hit_rate == mb.hit_rate);
    CHECK(ma.mrr == mb.mrr);
    CHECK(ma.ndcg == mb.ndcg);
  }
}
