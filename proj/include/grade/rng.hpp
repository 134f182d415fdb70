#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace grade {

// Every random draw in the library flows from one user seed through named
// sub-streams ("init", "negatives", "synth-...", ...), so reordering one
// consumer cannot silently reseed another.
//
// Draws are produced from the raw mt19937_64 output instead of the std
// distribution adaptors, whose results are implementation-defined and would
// break byte-reproducibility across toolchain updates.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view name);

  std::uint64_t next_u64();
  double uniform();                 // [0, 1)
  double normal();                  // standard normal, Box-Muller
  int uniform_int(int lo, int hi);  // inclusive, rejection-sampled (no modulo bias)

 private:
  std::mt19937_64 gen_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::string_view name);

}  // namespace grade
