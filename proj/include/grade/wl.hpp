#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "grade/graph.hpp"

namespace grade {

// Canonical per-depth node colors. colors[m][v] identifies the depth-m
// rooted subtree at v: two nodes (in any graphs relabeled through the SAME
// WlRelabeler) carry equal ids iff their subtrees match exactly.
struct WlColorSequence {
  std::vector<std::vector<int>> colors;  // colors[m][v], m = 0..depth
  int depth() const { return static_cast<int>(colors.size()) - 1; }
  int num_nodes() const { return colors.empty() ? 0 : static_cast<int>(colors[0].size()); }
};

// Iterative relabeling: depth-m id interns the pair (depth-(m-1) id of the
// node, sorted multiset of its neighbors' depth-(m-1) ids). Interning is by
// exact signature string, so distinct subtrees can never collide. The table
// persists across calls, which is what makes ids comparable across graphs.
class WlRelabeler {
 public:
  WlColorSequence relabel(const Graph& g, const std::vector<std::string>& init_labels, int depth);

  // Canonical id for a (color, tag) pair; used to refine colors with degrees.
  int refine(int color, int tag);

  int table_size() const { return static_cast<int>(table_.size()); }

 private:
  int intern(const std::string& signature);
  std::unordered_map<std::string, int> table_;
};

// Colors at each depth jointly refined with node degree.
WlColorSequence refine_with_degrees(const WlColorSequence& seq,
                                    const std::vector<int>& degrees,
                                    WlRelabeler& relabeler);

// Empirical pattern distribution at one depth. Counts are kept as integers
// (frequency(tau) = counts[tau] / node_count); downstream comparisons stay
// exact because they reduce to integer arithmetic over a common denominator.
struct PatternHistogram {
  std::map<int, long long> counts;
  long long node_count = 0;
  double frequency(int pattern) const;
};

PatternHistogram subtree_histogram(const WlColorSequence& seq, int m);

// Inner product of the two frequency vectors.
double histogram_similarity(const PatternHistogram& p, const PatternHistogram& q);

// Total variation distance, 0.5 * sum |p - q|, in [0, 1].
double histogram_tv(const PatternHistogram& p, const PatternHistogram& q);

// Exact integer numerators over the common denominators:
//   tv         = tv_numerator / (2 n_p n_q)
//   similarity = similarity_numerator / (n_p n_q)
// Exposed so depth averages can be formed with a single division, which keeps
// cross-depth and refinement comparisons exact in floating point.
long long histogram_tv_numerator(const PatternHistogram& p, const PatternHistogram& q);
long long histogram_similarity_numerator(const PatternHistogram& p, const PatternHistogram& q);

struct KernelResult {
  std::vector<long long> match_counts;  // per depth: number of matching node pairs
  std::vector<double> per_depth;        // match_counts[m] / (n1 * n2)
  double value = 0.0;                   // sum over depths of per_depth
};

// Subtree kernel over depths 0..depth: mean over node pairs of the count of
// depths at which the pair's subtrees coincide.
KernelResult wl_subtree_kernel_detail(const Graph& g1, const std::vector<std::string>& labels1,
                                      const Graph& g2, const std::vector<std::string>& labels2,
                                      int depth);

double wl_subtree_kernel(const Graph& g1, const std::vector<std::string>& labels1,
                         const Graph& g2, const std::vector<std::string>& labels2, int depth);

// "deg<k>" tokens with k clipped to max_bucket; the label-free default for
// kernel and discrepancy runs on unlabeled graphs.
std::vector<std::string> degree_bucket_labels(const Graph& g, int max_bucket);

std::vector<std::string> uniform_labels(const Graph& g);

}  // namespace grade
