#pragma once

#include <Eigen/Dense>
#include <vector>

namespace grade {

double accuracy(const Eigen::VectorXi& predicted, const Eigen::VectorXi& truth);

struct MaeR2 {
  double mae = 0.0;
  double r2 = 0.0;
};

// Needs >= 2 points and non-constant truth (R^2 is undefined otherwise).
MaeR2 mae_r2(const Eigen::VectorXd& predicted, const Eigen::VectorXd& truth);

// Leave-one-out ranking: each user case holds candidate ids with scores and
// the index of the single held-out positive. Candidates are ranked by score
// descending, ties broken by id ascending; with 1-based rank r:
//   hit rate  = 1[r <= k]
//   mrr       = 1/r      if r <= k else 0
//   ndcg      = 1/log2(r+1) if r <= k else 0
// Reported values are means over users.
struct UserCase {
  std::vector<long long> candidate_ids;
  std::vector<double> scores;
  int positive_index = 0;  // into candidate_ids
};

struct RankedEval {
  std::vector<UserCase> users;
  int k = 10;
};

struct RankingMetrics {
  double hit_rate = 0.0;
  double mrr = 0.0;
  double ndcg = 0.0;
};

RankingMetrics rank_metrics(const RankedEval& eval);

}  // namespace grade
