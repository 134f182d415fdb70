#include "grade/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace grade {

namespace {

void check_mmd_inputs(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& xt, double bandwidth,
                      MmdEstimator estimator) {
  if (xs.cols() != xt.cols())
    throw std::invalid_argument("mmd2: dimension mismatch (" + std::to_string(xs.cols()) +
                                " vs " + std::to_string(xt.cols()) + ")");
  if (xs.rows() < 1 || xt.rows() < 1) throw std::invalid_argument("mmd2: empty sample");
  if (estimator == MmdEstimator::Unbiased && (xs.rows() < 2 || xt.rows() < 2))
    throw std::invalid_argument("mmd2: unbiased estimator needs at least 2 rows per side");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
    throw std::invalid_argument("mmd2: bandwidth must be positive and finite");
}

// Value and (optionally) gradient in one sweep. Gradients are assembled
// row-locally: each row's within-set and cross-set sums run over the other
// rows in the same index order, so when xs and xt are bit-identical the two
// sums cancel exactly and the discrepancy contributes exact zeros.
double mmd_core(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& xt, double bandwidth,
                MmdEstimator estimator, double weight, Eigen::MatrixXd* gs,
                Eigen::MatrixXd* gt) {
  check_mmd_inputs(xs, xt, bandwidth, estimator);

  const Eigen::Index n = xs.rows();
  const Eigen::Index m = xt.rows();
  const double inv_two_sig2 = 1.0 / (2.0 * bandwidth * bandwidth);
  const double inv_sig2 = 1.0 / (bandwidth * bandwidth);

  const double cw_s = estimator == MmdEstimator::Biased
                          ? 2.0 / (static_cast<double>(n) * n)
                          : 2.0 / (static_cast<double>(n) * (n - 1));
  const double cw_t = estimator == MmdEstimator::Biased
                          ? 2.0 / (static_cast<double>(m) * m)
                          : 2.0 / (static_cast<double>(m) * (m - 1));
  const double cc = 2.0 / (static_cast<double>(n) * m);

  double sxx = 0.0, stt = 0.0, sxt = 0.0;
  Eigen::RowVectorXd acc_within(xs.cols()), acc_cross(xs.cols());

  for (Eigen::Index i = 0; i < n; ++i) {
    double row_xx = 0.0, row_xt = 0.0;
    if (gs) {
      acc_within.setZero();
      acc_cross.setZero();
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double k = std::exp(-inv_two_sig2 * (xs.row(i) - xs.row(j)).squaredNorm());
      row_xx += k;
      if (gs) acc_within += k * (xs.row(j) - xs.row(i));
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      const double k = std::exp(-inv_two_sig2 * (xs.row(i) - xt.row(j)).squaredNorm());
      row_xt += k;
      if (gs) acc_cross += k * (xt.row(j) - xs.row(i));
    }
    sxx += row_xx;
    sxt += row_xt;
    if (gs) gs->row(i) += (weight * inv_sig2) * (cw_s * acc_within - cc * acc_cross);
  }

  for (Eigen::Index j = 0; j < m; ++j) {
    double row_tt = 0.0;
    if (gt) {
      acc_within.setZero();
      acc_cross.setZero();
    }
    for (Eigen::Index l = 0; l < m; ++l) {
      const double k = std::exp(-inv_two_sig2 * (xt.row(j) - xt.row(l)).squaredNorm());
      row_tt += k;
      if (gt) acc_within += k * (xt.row(l) - xt.row(j));
    }
    if (gt) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double k = std::exp(-inv_two_sig2 * (xs.row(i) - xt.row(j)).squaredNorm());
        acc_cross += k * (xs.row(i) - xt.row(j));
      }
      gt->row(j) += (weight * inv_sig2) * (cw_t * acc_within - cc * acc_cross);
    }
    stt += row_tt;
  }

  const double nn = static_cast<double>(n) * n;
  const double mm = static_cast<double>(m) * m;
  const double nm = static_cast<double>(n) * m;
  if (estimator == MmdEstimator::Biased)
    return sxx / nn + stt / mm - 2.0 * (sxt / nm);
  return (sxx - n) / (static_cast<double>(n) * (n - 1)) +
         (stt - m) / (static_cast<double>(m) * (m - 1)) - 2.0 * (sxt / nm);
}

void check_coral_inputs(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& xt) {
  if (xs.cols() != xt.cols())
    throw std::invalid_argument("coral: dimension mismatch (" + std::to_string(xs.cols()) +
                                " vs " + std::to_string(xt.cols()) + ")");
  if (xs.cols() < 1) throw std::invalid_argument("coral: zero-dimensional samples");
  if (xs.rows() < 2 || xt.rows() < 2)
    throw std::invalid_argument("coral: need at least 2 rows per side");
}

Eigen::MatrixXd covariance(const Eigen::MatrixXd& x, Eigen::MatrixXd* centered) {
  const Eigen::MatrixXd xc = x.rowwise() - x.colwise().mean();
  if (centered) *centered = xc;
  return (xc.transpose() * xc) / static_cast<double>(x.rows() - 1);
}

}  // namespace

double mmd2(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& xt, double bandwidth,
            MmdEstimator estimator) {
  return mmd_core(xs, xt, bandwidth, estimator, 0.0, nullptr, nullptr);
}

double mmd2_with_grad(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& xt, double bandwidth,
                      MmdEstimator estimator, double weight, Eigen::MatrixXd& gs,
                      Eigen::MatrixXd& gt) {
  if (gs.rows() != xs.rows() || gs.cols() != xs.cols() || gt.rows() != xt.rows() ||
      gt.cols() != xt.cols())
    throw std::invalid_argument("mmd2_with_grad: gradient shape mismatch");
  return mmd_core(xs, xt, bandwidth, estimator, weight, &gs, &gt);
}

double coral(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& xt) {
  check_coral_inputs(xs, xt);
  const double d = static_cast<double>(xs.cols());
  const Eigen::MatrixXd diff = covariance(xs, nullptr) - covariance(xt, nullptr);
  return diff.squaredNorm() / (4.0 * d * d);
}

double coral_with_grad(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& xt, double weight,
                       Eigen::MatrixXd& gs, Eigen::MatrixXd& gt) {
  check_coral_inputs(xs, xt);
  if (gs.rows() != xs.rows() || gs.cols() != xs.cols() || gt.rows() != xt.rows() ||
      gt.cols() != xt.cols())
    throw std::invalid_argument("coral_with_grad: gradient shape mismatch");

  const double d = static_cast<double>(xs.cols());
  Eigen::MatrixXd xc_s, xc_t;
  const Eigen::MatrixXd diff = covariance(xs, &xc_s) - covariance(xt, &xc_t);

  // d/dX ||Cov(Xs)-Cov(Xt)||_F^2 / (4d^2): centered rows times the
  // covariance gap; centering needs no extra projection since Xc * diff is
  // already column-centered.
  gs += (weight / (d * d * static_cast<double>(xs.rows() - 1))) * (xc_s * diff);
  gt -= (weight / (d * d * static_cast<double>(xt.rows() - 1))) * (xc_t * diff);
  return diff.squaredNorm() / (4.0 * d * d);
}

double median_bandwidth(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& xt) {
  if (xs.cols() != xt.cols()) throw std::invalid_argument("median_bandwidth: dimension mismatch");
  const Eigen::Index n = xs.rows(), m = xt.rows();
  if (n + m < 2) throw std::invalid_argument("median_bandwidth: fewer than 2 pooled rows");

  auto row = [&](Eigen::Index i) { return i < n ? xs.row(i) : xt.row(i - n); };

  std::vector<double> sq;
  sq.reserve(static_cast<size_t>(n + m) * (n + m - 1) / 2);
  for (Eigen::Index i = 0; i < n + m; ++i)
    for (Eigen::Index j = i + 1; j < n + m; ++j) {
      const double d2 = (row(i) - row(j)).squaredNorm();
      if (d2 > 0.0) sq.push_back(d2);
    }
  if (sq.empty())
    throw std::invalid_argument("median_bandwidth: all pooled rows are identical");

  const size_t mid = (sq.size() - 1) / 2;  // lower median
  std::nth_element(sq.begin(), sq.begin() + mid, sq.end());
  return std::sqrt(sq[mid]);
}

namespace {

void check_sequences(const SubtreeEmbeddingSequence& s, const SubtreeEmbeddingSequence& t) {
  if (s.f.empty() || t.f.empty()) throw std::invalid_argument("gsd: empty embedding sequence");
  if (s.depth() != t.depth())
    throw std::invalid_argument("gsd: depth mismatch (" + std::to_string(s.depth()) + " vs " +
                                std::to_string(t.depth()) + ")");
  for (const auto& fm : s.f)
    if (fm.rows() != s.f[0].rows())
      throw std::invalid_argument("gsd: inconsistent node count across depths");
  for (const auto& fm : t.f)
    if (fm.rows() != t.f[0].rows())
      throw std::invalid_argument("gsd: inconsistent node count across depths");
}

void check_extra(const SubtreeEmbeddingSequence& s, const Eigen::MatrixXd& extra,
                 const char* which) {
  if (extra.rows() != s.num_nodes())
    throw std::invalid_argument(std::string("gsd: ") + which +
                                " rows do not match embedding rows");
}

void check_one_hot(const Eigen::MatrixXd& y, const char* which) {
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
      if (y(i, j) != 0.0 && y(i, j) != 1.0)
        throw std::invalid_argument(std::string("gsd_label: ") + which + " row " +
                                    std::to_string(i) + " is not one-hot");
      sum += y(i, j);
    }
    if (sum != 1.0)
      throw std::invalid_argument(std::string("gsd_label: ") + which + " row " +
                                  std::to_string(i) + " is not one-hot");
  }
}

Eigen::MatrixXd concat_cols(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

DiscrepancyReport aggregate(const SubtreeEmbeddingSequence& s, const SubtreeEmbeddingSequence& t,
                            const Eigen::MatrixXd* extra_s, const Eigen::MatrixXd* extra_t,
                            const BaseDiscrepancy& base, const std::string& base_name) {
  check_sequences(s, t);
  DiscrepancyReport rep;
  rep.base_name = base_name;
  double sum = 0.0;
  for (int m = 0; m <= s.depth(); ++m) {
    const double v = extra_s ? base(concat_cols(s.f[m], *extra_s), concat_cols(t.f[m], *extra_t))
                             : base(s.f[m], t.f[m]);
    rep.per_depth.push_back(v);
    sum += v;
  }
  rep.gsd = sum / static_cast<double>(s.depth() + 1);
  return rep;
}

}  // namespace

DiscrepancyReport gsd(const SubtreeEmbeddingSequence& s, const SubtreeEmbeddingSequence& t,
                      const BaseDiscrepancy& base, const std::string& base_name) {
  return aggregate(s, t, nullptr, nullptr, base, base_name);
}

DiscrepancyReport gsd_degree(const SubtreeEmbeddingSequence& s, const SubtreeEmbeddingSequence& t,
                             const Eigen::MatrixXd& deg_s, const Eigen::MatrixXd& deg_t,
                             const BaseDiscrepancy& base, const std::string& base_name) {
  check_sequences(s, t);
  check_extra(s, deg_s, "degree one-hot (source)");
  check_extra(t, deg_t, "degree one-hot (target)");
  return aggregate(s, t, &deg_s, &deg_t, base, base_name + "+degree");
}

DiscrepancyReport gsd_label(const SubtreeEmbeddingSequence& s, const SubtreeEmbeddingSequence& t,
                            const Eigen::MatrixXd& y_s, const Eigen::MatrixXd& y_t,
                            const BaseDiscrepancy& base, const std::string& base_name) {
  check_sequences(s, t);
  check_extra(s, y_s, "label one-hot (source)");
  check_extra(t, y_t, "label one-hot (target)");
  check_one_hot(y_s, "source");
  check_one_hot(y_t, "target");
  return aggregate(s, t, &y_s, &y_t, base, base_name + "+label");
}

DiscrepancyReport gsd_mmd_report(const SubtreeEmbeddingSequence& s,
                                 const SubtreeEmbeddingSequence& t,
                                 const Eigen::MatrixXd* extra_s, const Eigen::MatrixXd* extra_t,
                                 MmdEstimator estimator) {
  check_sequences(s, t);
  if ((extra_s == nullptr) != (extra_t == nullptr))
    throw std::invalid_argument("gsd_mmd_report: extra block must be given for both sides");
  if (extra_s) {
    check_extra(s, *extra_s, "extra block (source)");
    check_extra(t, *extra_t, "extra block (target)");
  }

  DiscrepancyReport rep;
  rep.base_name = estimator == MmdEstimator::Biased ? "mmd" : "mmd-unbiased";
  if (extra_s) rep.base_name += "+extra";
  double sum = 0.0;
  for (int m = 0; m <= s.depth(); ++m) {
    const Eigen::MatrixXd a = extra_s ? concat_cols(s.f[m], *extra_s) : s.f[m];
    const Eigen::MatrixXd b = extra_t ? concat_cols(t.f[m], *extra_t) : t.f[m];
    const double sigma = median_bandwidth(a, b);
    const double v = mmd2(a, b, sigma, estimator);
    rep.per_depth.push_back(v);
    rep.bandwidths.push_back(sigma);
    sum += v;
  }
  rep.gsd = sum / static_cast<double>(s.depth() + 1);
  return rep;
}

namespace {

// The counting bases share one denominator across depths (node counts never
// change), so each per-depth value and the depth mean are single divisions
// of exact integers. That keeps three facts exact in floating point: equal
// numerators give bit-equal values, per-depth monotonicity follows integer
// order, and the mean of equal per-depth values is bit-equal to any of them.
DiscrepancyReport histogram_report(const WlColorSequence& s, const WlColorSequence& t,
                                   bool tv_base) {
  if (s.depth() != t.depth())
    throw std::invalid_argument("gsd: depth mismatch (" + std::to_string(s.depth()) + " vs " +
                                std::to_string(t.depth()) + ")");
  DiscrepancyReport rep;
  rep.base_name = tv_base ? "histogram_tv" : "histogram_similarity";
  std::vector<long long> nums;
  long long total = 0;
  for (int m = 0; m <= s.depth(); ++m) {
    const PatternHistogram hp = subtree_histogram(s, m);
    const PatternHistogram hq = subtree_histogram(t, m);
    const long long num =
        tv_base ? histogram_tv_numerator(hp, hq) : histogram_similarity_numerator(hp, hq);
    nums.push_back(num);
    total += num;
  }
  const double denom = (tv_base ? 2.0 : 1.0) * static_cast<double>(s.num_nodes()) *
                       static_cast<double>(t.num_nodes());
  for (long long num : nums) rep.per_depth.push_back(static_cast<double>(num) / denom);
  rep.gsd = static_cast<double>(total) / (denom * static_cast<double>(s.depth() + 1));
  return rep;
}

}  // namespace

DiscrepancyReport gsd_histogram_tv(const WlColorSequence& s, const WlColorSequence& t) {
  return histogram_report(s, t, true);
}

DiscrepancyReport gsd_histogram_similarity(const WlColorSequence& s, const WlColorSequence& t) {
  return histogram_report(s, t, false);
}

}  // namespace grade
