#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "grade/trainer.hpp"

namespace grade {

struct BenchRow {
  int n = 0;
  double seconds = 0.0;  // wall clock for one training epoch at this size
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::optional<double> fit_r2;  // linear fit seconds ~ a + b*n (needs >= 2 sizes)
  double fit_intercept = 0.0;
  double fit_slope = 0.0;
};

// Training config tuned for timing rather than model quality. The
// discrepancy sample cap is lowered so the capped (size-independent) part of
// the epoch stays small next to the node-linear part; otherwise the linear
// fit at moderate sizes mostly measures timer jitter on a flat curve.
TrainConfig bench_default_config();

// One GRADE-N epoch per size on a (n nodes, 2n edges) source/target pair
// with random binary labels. Each reported figure is the fastest of several
// single-epoch runs; a warm-up run at the smallest size is not timed.
BenchResult run_bench(const std::vector<int>& sizes, std::uint64_t seed, TrainConfig cfg);

}  // namespace grade
