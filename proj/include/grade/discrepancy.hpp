#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "grade/embedding.hpp"
#include "grade/wl.hpp"

namespace grade {

enum class MmdEstimator { Biased, Unbiased };

// Squared maximum mean discrepancy under the Gaussian kernel
// k(x,y) = exp(-||x-y||^2 / (2 sigma^2)), rows = samples.
// Biased: all three block means include diagonals. Unbiased: within-set
// means exclude the diagonal (needs >= 2 rows per side, may be negative).
double mmd2(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& xt, double bandwidth,
            MmdEstimator estimator = MmdEstimator::Biased);

// Same value; also accumulates weight * d(mmd2)/dx into gs / gt, which must
// be preallocated to the operand shapes.
double mmd2_with_grad(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& xt, double bandwidth,
                      MmdEstimator estimator, double weight, Eigen::MatrixXd& gs,
                      Eigen::MatrixXd& gt);

// ||Cov(xs) - Cov(xt)||_F^2 / (4 d^2) with 1/(n-1) covariance normalization.
double coral(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& xt);

double coral_with_grad(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& xt, double weight,
                       Eigen::MatrixXd& gs, Eigen::MatrixXd& gt);

// sigma = sqrt(median of nonzero squared pairwise distances over the pooled
// rows). Zero-distance pairs (duplicates, self) are excluded; errors when
// every pooled row is identical.
double median_bandwidth(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& xt);

struct DiscrepancyReport {
  std::vector<double> per_depth;
  double gsd = 0.0;  // mean of per_depth, summed in depth order
  std::string base_name;
  std::vector<double> bandwidths;  // per depth; empty when base has none
};

using BaseDiscrepancy = std::function<double(const Eigen::MatrixXd&, const Eigen::MatrixXd&)>;

// Depth-averaged base discrepancy between two embedding sequences.
DiscrepancyReport gsd(const SubtreeEmbeddingSequence& s, const SubtreeEmbeddingSequence& t,
                      const BaseDiscrepancy& base, const std::string& base_name);

// Structure-aware variant: each depth compares [f_m(v) || degree one-hot(v)].
// The degree blocks must row-match their embedding sequences.
DiscrepancyReport gsd_degree(const SubtreeEmbeddingSequence& s, const SubtreeEmbeddingSequence& t,
                             const Eigen::MatrixXd& deg_s, const Eigen::MatrixXd& deg_t,
                             const BaseDiscrepancy& base, const std::string& base_name);

// Label-informed variant: [f_m(v) || y(v)] with one-hot (pseudo-)labels.
DiscrepancyReport gsd_label(const SubtreeEmbeddingSequence& s, const SubtreeEmbeddingSequence& t,
                            const Eigen::MatrixXd& y_s, const Eigen::MatrixXd& y_t,
                            const BaseDiscrepancy& base, const std::string& base_name);

// Gaussian-MMD aggregate with a fresh median bandwidth per depth; the
// report records the bandwidths used. extra_* (may be null) are per-node
// one-hot blocks concatenated at every depth.
DiscrepancyReport gsd_mmd_report(const SubtreeEmbeddingSequence& s,
                                 const SubtreeEmbeddingSequence& t,
                                 const Eigen::MatrixXd* extra_s, const Eigen::MatrixXd* extra_t,
                                 MmdEstimator estimator = MmdEstimator::Biased);

// Counting path: per-depth histogram distance between two color sequences
// produced by one shared relabeler.
DiscrepancyReport gsd_histogram_tv(const WlColorSequence& s, const WlColorSequence& t);
DiscrepancyReport gsd_histogram_similarity(const WlColorSequence& s, const WlColorSequence& t);

}  // namespace grade
