#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "grade/rng.hpp"

using grade::RngStream;

TEST_CASE("same seed and stream name reproduce the sequence") {
  RngStream a(42, "init");
  RngStream b(42, "init");
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different stream names decorrelate under one seed") {
  RngStream a(42, "init");
  RngStream b(42, "negatives");
  int same = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() == b.next_u64()) ++same;
  CHECK(same == 0);
}

TEST_CASE("uniform stays in the half-open unit interval") {
  RngStream r(7, "test");
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform_int covers the whole inclusive range and nothing else") {
  RngStream r(3, "test");
  std::set<int> seen;
  for (int i = 0; i < 2000; ++i) {
    const int v = r.uniform_int(-2, 4);
    CHECK(v >= -2);
    CHECK(v <= 4);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("normal draws are finite with sane first moments") {
  RngStream r(11, "test");
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    CHECK(std::isfinite(x));
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.05);
  CHECK(std::abs(var - 1.0) < 0.1);
}
