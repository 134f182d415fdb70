#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "grade/discrepancy.hpp"
#include "grade/embedding.hpp"
#include "grade/rng.hpp"

using namespace grade;

namespace {

Eigen::MatrixXd random_rows(RngStream& rng, int n, int d) {
  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = rng.normal();
  return x;
}

// O(n^2) oracle written directly from the kernel-sum definitions.
double mmd2_oracle(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& xt, double sigma,
                   MmdEstimator est) {
  const auto k = [&](const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
    return std::exp(-(a - b).squaredNorm() / (2.0 * sigma * sigma));
  };
  const int n = static_cast<int>(xs.rows());
  const int m = static_cast<int>(xt.rows());
  double sxx = 0, stt = 0, sxt = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sxx += k(xs.row(i), xs.row(j));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) stt += k(xt.row(i), xt.row(j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) sxt += k(xs.row(i), xt.row(j));
  if (est == MmdEstimator::Biased)
    return sxx / (double(n) * n) + stt / (double(m) * m) - 2.0 * sxt / (double(n) * m);
  return (sxx - n) / (double(n) * (n - 1)) + (stt - m) / (double(m) * (m - 1)) -
         2.0 * sxt / (double(n) * m);
}

}  // namespace

TEST_CASE("mmd2 matches the quadratic oracle") {
  RngStream rng(77, "test");
  for (int trial = 0; trial < 25; ++trial) {
    const int n = rng.uniform_int(2, 24);
    const int m = rng.uniform_int(2, 24);
    const int d = rng.uniform_int(1, 6);
    const Eigen::MatrixXd xs = random_rows(rng, n, d);
    const Eigen::MatrixXd xt = random_rows(rng, m, d);
    const double sigma = 0.5 + rng.uniform() * 2.0;
    for (MmdEstimator est : {MmdEstimator::Biased, MmdEstimator::Unbiased}) {
      const double got = mmd2(xs, xt, sigma, est);
      const double want = mmd2_oracle(xs, xt, sigma, est);
      CHECK(std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("biased mmd2 of singletons at distance 1") {
  Eigen::MatrixXd xs(1, 2), xt(1, 2);
  xs << 1.0, 0.0;
  xt << 0.0, 0.0;
  const double got = mmd2(xs, xt, 1.0, MmdEstimator::Biased);
  const double want = 2.0 - 2.0 * std::exp(-0.5);
  CHECK(std::abs(got - want) <= 1e-12);
}

TEST_CASE("biased mmd2 on identical samples is exactly zero") {
  RngStream rng(5, "test");
  const Eigen::MatrixXd x = random_rows(rng, 17, 4);
  CHECK(mmd2(x, x, 1.3, MmdEstimator::Biased) == 0.0);
}

TEST_CASE("mmd2 gradient matches central differences") {
  RngStream rng(13, "test");
  const int n = 6, m = 5, d = 3;
  const Eigen::MatrixXd xs = random_rows(rng, n, d);
  const Eigen::MatrixXd xt = random_rows(rng, m, d);
  const double sigma = 1.1;
  for (MmdEstimator est : {MmdEstimator::Biased, MmdEstimator::Unbiased}) {
    Eigen::MatrixXd gs = Eigen::MatrixXd::Zero(n, d);
    Eigen::MatrixXd gt = Eigen::MatrixXd::Zero(m, d);
    mmd2_with_grad(xs, xt, sigma, est, 1.0, gs, gt);
    const double h = 1e-6;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) {
        Eigen::MatrixXd xp = xs, xm = xs;
        xp(i, j) += h;
        xm(i, j) -= h;
        const double fd = (mmd2(xp, xt, sigma, est) - mmd2(xm, xt, sigma, est)) / (2 * h);
        CHECK(std::abs(gs(i, j) - fd) < 1e-6);
      }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < d; ++j) {
        Eigen::MatrixXd xp = xt, xm = xt;
        xp(i, j) += h;
        xm(i, j) -= h;
        const double fd = (mmd2(xs, xp, sigma, est) - mmd2(xs, xm, sigma, est)) / (2 * h);
        CHECK(std::abs(gt(i, j) - fd) < 1e-6);
      }
  }
}

TEST_CASE("gradient on identical samples is exactly zero (biased)") {
  RngStream rng(21, "test");
  const Eigen::MatrixXd x = random_rows(rng, 9, 3);
  Eigen::MatrixXd gs = Eigen::MatrixXd::Zero(9, 3);
  Eigen::MatrixXd gt = Eigen::MatrixXd::Zero(9, 3);
  mmd2_with_grad(x, x, 0.9, MmdEstimator::Biased, 1.0, gs, gt);
  CHECK(gs.cwiseAbs().maxCoeff() == 0.0);
  CHECK(gt.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("coral frozen value and gradient") {
  Eigen::MatrixXd xs(2, 2), xt(2, 2);
  xs << 0, 0, 2, 0;
  xt << 0, 0, 0, 2;
  CHECK(coral(xs, xt) == 0.5);

  Eigen::MatrixXd gs = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd gt = Eigen::MatrixXd::Zero(2, 2);
  coral_with_grad(xs, xt, 1.0, gs, gt);
  const double h = 1e-6;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Eigen::MatrixXd xp = xs, xm = xs;
      xp(i, j) += h;
      xm(i, j) -= h;
      const double fd = (coral(xp, xt) - coral(xm, xt)) / (2 * h);
      CHECK(std::abs(gs(i, j) - fd) < 1e-6);
      Eigen::MatrixXd tp = xt, tm = xt;
      tp(i, j) += h;
      tm(i, j) -= h;
      const double fdt = (coral(xs, tp) - coral(xs, tm)) / (2 * h);
      CHECK(std::abs(gt(i, j) - fdt) < 1e-6);
    }
}

TEST_CASE("median bandwidth of points 0,1,3 is 2") {
  Eigen::MatrixXd a(2, 1), b(1, 1);
  a << 0.0, 1.0;
  b << 3.0;
  CHECK(median_bandwidth(a, b) == 2.0);
}

TEST_CASE("median bandwidth rejects coincident pools") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Ones(3, 2);
  Eigen::MatrixXd b = Eigen::MatrixXd::Ones(2, 2);
  CHECK_THROWS_AS(median_bandwidth(a, b), std::invalid_argument);
}

TEST_CASE("gsd averages per-depth values and reports bandwidths") {
  RngStream rng(31, "test");
  SubtreeEmbeddingSequence sa, sb;
  for (int m = 0; m < 3; ++m) {
    sa.f.push_back(random_rows(rng, 10, 4));
    sb.f.push_back(random_rows(rng, 12, 4));
  }
  const DiscrepancyReport rep = gsd_mmd_report(sa, sb, nullptr, nullptr, MmdEstimator::Biased);
  REQUIRE(rep.per_depth.size() == 3);
  REQUIRE(rep.bandwidths.size() == 3);
  double mean = 0;
  for (double v : rep.per_depth) mean += v;
  mean /= 3.0;
  CHECK(rep.gsd == doctest::Approx(mean).epsilon(1e-15));
  CHECK(rep.base_name == "mmd");
}

TEST_CASE("gsd on identical embedding sequences is exactly zero") {
  RngStream rng(41, "test");
  SubtreeEmbeddingSequence sa;
  for (int m = 0; m < 3; ++m) sa.f.push_back(random_rows(rng, 8, 5));
  const DiscrepancyReport rep = gsd_mmd_report(sa, sa, nullptr, nullptr, MmdEstimator::Biased);
  CHECK(rep.gsd == 0.0);
}

TEST_CASE("degree variant concatenates structure columns") {
  RngStream rng(43, "test");
  SubtreeEmbeddingSequence sa, sb;
  sa.f.push_back(random_rows(rng, 6, 2));
  sb.f.push_back(random_rows(rng, 6, 2));
  const Eigen::MatrixXd da = Eigen::MatrixXd::Identity(6, 6);
  const Eigen::MatrixXd db = Eigen::MatrixXd::Identity(6, 6);
  const DiscrepancyReport plain = gsd_mmd_report(sa, sb, nullptr, nullptr, MmdEstimator::Biased);
  const DiscrepancyReport deg = gsd_mmd_report(sa, sb, &da, &db, MmdEstimator::Biased);
  CHECK(plain.gsd != deg.gsd);
  CHECK(deg.base_name == "mmd+extra");
}

TEST_CASE("label variant validates one-hot rows") {
  SubtreeEmbeddingSequence sa, sb;
  sa.f.push_back(Eigen::MatrixXd::Zero(2, 2));
  sb.f.push_back(Eigen::MatrixXd::Zero(2, 2));
  Eigen::MatrixXd bad = Eigen::MatrixXd::Constant(2, 2, 0.5);
  Eigen::MatrixXd good(2, 2);
  good << 1, 0, 0, 1;
  const BaseDiscrepancy base = [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    return coral(x, y);
  };
  CHECK_THROWS_AS(gsd_label(sa, sb, bad, good, base, "coral"), std::invalid_argument);
  CHECK_NOTHROW(gsd_label(sa, sb, good, good, base, "coral"));
}
