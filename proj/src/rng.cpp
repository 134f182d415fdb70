#include "grade/rng.hpp"

#include <cmath>
#include <limits>

namespace grade {

namespace {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::string_view name) {
  return splitmix64(seed ^ fnv1a64(name));
}

RngStream::RngStream(std::uint64_t seed, std::string_view name)
    : gen_(mix_seed(seed, name)) {}

std::uint64_t RngStream::next_u64() { return gen_(); }

double RngStream::uniform() {
  // 53 high bits -> dyadic rational in [0, 1)
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

int RngStream::uniform_int(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - lo + 1;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return lo + static_cast<int>(x % span);
}

}  // namespace grade
