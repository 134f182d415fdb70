#pragma once

#include <cstdint>
#include <string>

#include "grade/gnn.hpp"

namespace grade {

// Structured text checkpoint: header, layer dims, seed, then every parameter
// in flat order with 17 significant digits, which round-trips IEEE doubles
// bit-exactly through strtod.
void save_checkpoint(const std::string& path, const ModelParams& params, std::uint64_t seed);

struct Checkpoint {
  ModelParams params;
  std::uint64_t seed = 0;
};

Checkpoint load_checkpoint(const std::string& path);

}  // namespace grade
