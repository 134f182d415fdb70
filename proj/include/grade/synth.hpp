#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "grade/graph.hpp"

namespace grade {

// Block-model generator for controlled source/target shift experiments.
// Both graphs share the same per-class Gaussian mean vectors; attribute shift
// comes from scaling them differently, structure shift from overriding the
// target's intra-block edge probability. Equal scales and equal edge
// probabilities give two independent draws from the same distribution.
//
// Each class mean is a shared base vector plus a small per-class offset, so
// the mean-scale knob mostly translates the common feature direction while
// the class boundary direction moves far less. A model trained on the source
// alone calibrates its decision threshold to the source scale and degrades
// under the shift; aligning representation distributions recovers most of
// that loss, which is what the transfer objective exists to demonstrate.
struct SynthShiftConfig {
  int nodes_per_block = 50;
  int num_blocks = 2;
  double intra_edge_prob = 0.15;
  double inter_edge_prob = 0.05;
  int feature_dim = 16;
  double source_mean_scale = 1.0;
  double target_mean_scale = 1.0;
  std::optional<double> target_intra_edge_prob;  // unset = same as source
  std::uint64_t seed = 0;
};

// Returns (source, target), both labeled with block indices.
std::pair<Graph, Graph> synth_shift_pair(const SynthShiftConfig& cfg);

// Sparse benchmark graph: n nodes, exactly 2n distinct edges, uniform [0,1)
// features. Errors when 2n edges cannot fit in a simple graph.
Graph synth_bench_graph(int n, std::uint64_t seed);

}  // namespace grade
