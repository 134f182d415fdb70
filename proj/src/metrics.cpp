#include "grade/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace grade {

double accuracy(const Eigen::VectorXi& predicted, const Eigen::VectorXi& truth) {
  if (predicted.size() != truth.size())
    throw std::invalid_argument("accuracy: length mismatch");
  if (predicted.size() == 0) throw std::invalid_argument("accuracy: empty input");
  int correct = 0;
  for (Eigen::Index i = 0; i < predicted.size(); ++i)
    if (predicted(i) == truth(i)) ++correct;
  return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

MaeR2 mae_r2(const Eigen::VectorXd& predicted, const Eigen::VectorXd& truth) {
  if (predicted.size() != truth.size()) throw std::invalid_argument("mae_r2: length mismatch");
  if (predicted.size() < 2) throw std::invalid_argument("mae_r2: need at least 2 points");

  const double mean = truth.mean();
  const double ss_tot = (truth.array() - mean).matrix().squaredNorm();
  if (ss_tot == 0.0)
    throw std::invalid_argument("mae_r2: constant truth, R^2 undefined");

  MaeR2 out;
  out.mae = (predicted - truth).cwiseAbs().mean();
  out.r2 = 1.0 - (predicted - truth).squaredNorm() / ss_tot;
  return out;
}

namespace {

// 1-based rank of the positive: score descending, ties by id ascending.
int positive_rank(const UserCase& uc) {
  const size_t n = uc.candidate_ids.size();
  if (n == 0) throw std::invalid_argument("rank_metrics: empty candidate list");
  if (uc.scores.size() != n)
    throw std::invalid_argument("rank_metrics: score/candidate length mismatch");
  if (uc.positive_index < 0 || static_cast<size_t>(uc.positive_index) >= n)
    throw std::invalid_argument("rank_metrics: positive index out of range");
  const long long pos_id = uc.candidate_ids[uc.positive_index];
  int dup = 0;
  for (long long id : uc.candidate_ids)
    if (id == pos_id) ++dup;
  if (dup != 1)
    throw std::invalid_argument("rank_metrics: positive id appears " + std::to_string(dup) +
                                " times among candidates");
  for (double s : uc.scores)
    if (!std::isfinite(s)) throw std::invalid_argument("rank_metrics: non-finite score");

  const double pos_score = uc.scores[uc.positive_index];
  int rank = 1;
  for (size_t i = 0; i < n; ++i) {
    if (static_cast<int>(i) == uc.positive_index) continue;
    if (uc.scores[i] > pos_score ||
        (uc.scores[i] == pos_score && uc.candidate_ids[i] < pos_id))
      ++rank;
  }
  return rank;
}

}  // namespace

RankingMetrics rank_metrics(const RankedEval& eval) {
  if (eval.users.empty()) throw std::invalid_argument("rank_metrics: no users");
  if (eval.k < 1) throw std::invalid_argument("rank_metrics: k must be >= 1");

  RankingMetrics out;
  for (const UserCase& uc : eval.users) {
    const int r = positive_rank(uc);
    if (r <= eval.k) {
      out.hit_rate += 1.0;
      out.mrr += 1.0 / static_cast<double>(r);
      out.ndcg += 1.0 / std::log2(static_cast<double>(r) + 1.0);
    }
  }
  const double n = static_cast<double>(eval.users.size());
  out.hit_rate /= n;
  out.mrr /= n;
  out.ndcg /= n;
  return out;
}

}  // namespace grade
