#include "grade/wl.hpp"

#include <algorithm>
#include <stdexcept>

namespace grade {

int WlRelabeler::intern(const std::string& signature) {
  auto [it, inserted] = table_.emplace(signature, static_cast<int>(table_.size()));
  (void)inserted;
  return it->second;
}

WlColorSequence WlRelabeler::relabel(const Graph& g, const std::vector<std::string>& init_labels,
                                     int depth) {
  if (static_cast<int>(init_labels.size()) != g.num_nodes)
    throw std::invalid_argument("relabel: init label count does not match node count");
  if (depth < 0) throw std::invalid_argument("relabel: negative depth");

  const auto adj = g.adjacency_list();

  WlColorSequence seq;
  seq.colors.resize(depth + 1);

  auto& base = seq.colors[0];
  base.resize(g.num_nodes);
  for (int v = 0; v < g.num_nodes; ++v) base[v] = intern("L|" + init_labels[v]);

  std::string sig;
  for (int m = 1; m <= depth; ++m) {
    const auto& prev = seq.colors[m - 1];
    auto& cur = seq.colors[m];
    cur.resize(g.num_nodes);
    std::vector<int> nbr;
    for (int v = 0; v < g.num_nodes; ++v) {
      nbr.clear();
      for (int u : adj[v]) nbr.push_back(prev[u]);
      std::sort(nbr.begin(), nbr.end());
      sig = "S|" + std::to_string(prev[v]) + "|";
      for (size_t k = 0; k < nbr.size(); ++k) {
        if (k) sig += ',';
        sig += std::to_string(nbr[k]);
      }
      cur[v] = intern(sig);
    }
  }
  return seq;
}

int WlRelabeler::refine(int color, int tag) {
  return intern("R|" + std::to_string(color) + "|" + std::to_string(tag));
}

WlColorSequence refine_with_degrees(const WlColorSequence& seq, const std::vector<int>& degrees,
                                    WlRelabeler& relabeler) {
  if (static_cast<int>(degrees.size()) != seq.num_nodes())
    throw std::invalid_argument("refine_with_degrees: degree count does not match node count");
  WlColorSequence out;
  out.colors.resize(seq.colors.size());
  for (size_t m = 0; m < seq.colors.size(); ++m) {
    out.colors[m].resize(seq.colors[m].size());
    for (size_t v = 0; v < seq.colors[m].size(); ++v)
      out.colors[m][v] = relabeler.refine(seq.colors[m][v], degrees[v]);
  }
  return out;
}

double PatternHistogram::frequency(int pattern) const {
  auto it = counts.find(pattern);
  if (it == counts.end()) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(node_count);
}

PatternHistogram subtree_histogram(const WlColorSequence& seq, int m) {
  if (m < 0 || m > seq.depth())
    throw std::invalid_argument("subtree_histogram: depth " + std::to_string(m) +
                                " outside stored range 0.." + std::to_string(seq.depth()));
  if (seq.num_nodes() == 0)
    throw std::invalid_argument("subtree_histogram: empty color sequence");
  PatternHistogram h;
  h.node_count = seq.num_nodes();
  for (int c : seq.colors[m]) ++h.counts[c];
  return h;
}

long long histogram_similarity_numerator(const PatternHistogram& p, const PatternHistogram& q) {
  if (p.node_count <= 0 || q.node_count <= 0)
    throw std::invalid_argument("histogram_similarity: empty histogram");
  long long dot = 0;  // sum over shared patterns of count_p * count_q
  for (const auto& [pat, cp] : p.counts) {
    auto it = q.counts.find(pat);
    if (it != q.counts.end()) dot += cp * it->second;
  }
  return dot;
}

long long histogram_tv_numerator(const PatternHistogram& p, const PatternHistogram& q) {
  if (p.node_count <= 0 || q.node_count <= 0)
    throw std::invalid_argument("histogram_tv: empty histogram");
  // sum |c_p/n_p - c_q/n_q| as integers over the common denominator n_p*n_q,
  // so refinement inequalities survive floating point
  long long num = 0;
  auto it_p = p.counts.begin();
  auto it_q = q.counts.begin();
  while (it_p != p.counts.end() || it_q != q.counts.end()) {
    long long cp = 0, cq = 0;
    if (it_q == q.counts.end() || (it_p != p.counts.end() && it_p->first < it_q->first)) {
      cp = (it_p++)->second;
    } else if (it_p == p.counts.end() || it_q->first < it_p->first) {
      cq = (it_q++)->second;
    } else {
      cp = (it_p++)->second;
      cq = (it_q++)->second;
    }
    num += std::llabs(cp * q.node_count - cq * p.node_count);
  }
  return num;
}

double histogram_similarity(const PatternHistogram& p, const PatternHistogram& q) {
  return static_cast<double>(histogram_similarity_numerator(p, q)) /
         (static_cast<double>(p.node_count) * static_cast<double>(q.node_count));
}

double histogram_tv(const PatternHistogram& p, const PatternHistogram& q) {
  return static_cast<double>(histogram_tv_numerator(p, q)) /
         (2.0 * static_cast<double>(p.node_count) * static_cast<double>(q.node_count));
}

KernelResult wl_subtree_kernel_detail(const Graph& g1, const std::vector<std::string>& labels1,
                                      const Graph& g2, const std::vector<std::string>& labels2,
                                      int depth) {
  if (g1.num_nodes == 0 || g2.num_nodes == 0)
    throw std::invalid_argument("wl_subtree_kernel: empty graph");

  WlRelabeler relabeler;  // shared: ids comparable across the two graphs
  const WlColorSequence s1 = relabeler.relabel(g1, labels1, depth);
  const WlColorSequence s2 = relabeler.relabel(g2, labels2, depth);

  KernelResult res;
  const double nn = static_cast<double>(g1.num_nodes) * static_cast<double>(g2.num_nodes);
  long long total = 0;
  for (int m = 0; m <= depth; ++m) {
    const PatternHistogram h1 = subtree_histogram(s1, m);
    const PatternHistogram h2 = subtree_histogram(s2, m);
    long long matches = 0;
    for (const auto& [pat, c1] : h1.counts) {
      auto it = h2.counts.find(pat);
      if (it != h2.counts.end()) matches += c1 * it->second;
    }
    res.match_counts.push_back(matches);
    res.per_depth.push_back(static_cast<double>(matches) / nn);
    total += matches;
  }
  res.value = static_cast<double>(total) / nn;
  return res;
}

double wl_subtree_kernel(const Graph& g1, const std::vector<std::string>& labels1,
                         const Graph& g2, const std::vector<std::string>& labels2, int depth) {
  return wl_subtree_kernel_detail(g1, labels1, g2, labels2, depth).value;
}

std::vector<std::string> degree_bucket_labels(const Graph& g, int max_bucket) {
  if (max_bucket < 0) throw std::invalid_argument("degree_bucket_labels: negative max_bucket");
  const auto deg = g.degrees();
  std::vector<std::string> out(g.num_nodes);
  for (int v = 0; v < g.num_nodes; ++v)
    out[v] = "deg" + std::to_string(std::min(deg[v], max_bucket));
  return out;
}

std::vector<std::string> uniform_labels(const Graph& g) {
  return std::vector<std::string>(g.num_nodes, "x");
}

}  // namespace grade
