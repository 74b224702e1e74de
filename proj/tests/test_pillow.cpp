#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "munic/pillow.hpp"
#include "munic/transforms.hpp"

using namespace munic;

namespace {

// Grid quadrature of the empirical pillow process: integral over [0,1]^h of
// b(t)^2 with b(t) = (1/sqrt(n)) sum_i prod_{j in H} (1{X_ij <= t_j} - t_j).
double quadrature_sq_norm(const CubeSample& x, CoordSubset mask, int grid) {
  const auto n = x.rows();
  std::vector<int> axes;
  for (int j = 0; j < x.cols(); ++j)
    if (mask & (1u << j)) axes.push_back(j);
  const auto h = axes.size();
  std::vector<int> idx(h, 0);
  double total = 0.0;
  bool done = false;
  while (!done) {
    double b = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double term = 1.0;
      for (std::size_t d = 0; d < h; ++d) {
        const double t = (idx[d] + 0.5) / grid;
        term *= (x(i, axes[d]) <= t ? 1.0 : 0.0) - t;
      }
      b += term;
    }
    total += b * b / static_cast<double>(n);
    std::size_t d = 0;
    for (; d < h; ++d) {
      if (++idx[d] < grid) break;
      idx[d] = 0;
    }
    done = (d == h);
  }
  return total / std::pow(static_cast<double>(grid), static_cast<double>(h));
}

}  // namespace

TEST_CASE("bridge kernel closed-form points and zero mean") {
  CHECK(bridge_kernel(0.5, 0.5) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  CHECK(bridge_kernel(0.0, 1.0) == doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
  Rng rng(1);
  for (int c = 0; c < 20; ++c) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    CHECK(bridge_kernel(x, y) == doctest::Approx(bridge_kernel(y, x)).epsilon(1e-15));
  }
  // int_0^1 k(x, y) dx = 0 for fixed y (midpoint rule, second-order error)
  for (double y : {0.0, 0.3, 0.77, 1.0}) {
    const int g = 20000;
    double acc = 0.0;
    for (int i = 0; i < g; ++i) acc += bridge_kernel((i + 0.5) / g, y);
    CHECK(std::fabs(acc / g) < 1e-9);
  }
}

TEST_CASE("sq_norm hand values") {
  CubeSample one(1, 1);
  one << 0.5;
  CHECK(sq_norm(one, 1u) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  CubeSample two(2, 1);
  two << 0.0, 1.0;
  CHECK(sq_norm(two, 1u) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("sq_norm equals grid quadrature of the empirical process") {
  Rng rng(7);
  for (int rep = 0; rep < 3; ++rep) {
    const CubeSample x = uniform_cube_sample(15, 2, rng);
    CHECK(sq_norm(x, 1u) == doctest::Approx(quadrature_sq_norm(x, 1u, 4000)).epsilon(1e-4));
    CHECK(sq_norm(x, 3u) == doctest::Approx(quadrature_sq_norm(x, 3u, 700)).epsilon(1e-3));
  }
}

TEST_CASE("sq_norms_all is bitwise identical to per-subset sq_norm") {
  Rng rng(9);
  const CubeSample x = uniform_cube_sample(40, 4, rng);
  const SubsetFamily fam = SubsetFamily::resolve(SubsetFamily::Kind::full, 4);
  const SqNormVector all = sq_norms_all(x, fam);
  REQUIRE(all.size() == 15);
  for (std::size_t i = 0; i < fam.masks.size(); ++i) {
    CHECK(all[i] == sq_norm(x, fam.masks[i]));  // exact, same fold order
    CHECK(all[i] >= 0.0);
  }
}

TEST_CASE("partial families restrict the output") {
  Rng rng(10);
  const CubeSample x = uniform_cube_sample(20, 3, rng);
  const SubsetFamily min2 = SubsetFamily::resolve(SubsetFamily::Kind::min_card, 3, 2);
  CHECK(sq_norms_all(x, min2).size() == 4);
  for (CoordSubset m : min2.masks) CHECK(subset_cardinality(m) >= 2);
}

TEST_CASE("row permutation invariance and column relabeling equivariance") {
  Rng rng(11);
  const CubeSample x = uniform_cube_sample(25, 3, rng);
  CubeSample shuffled = x;
  std::vector<int> order(25);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937{123});
  for (int i = 0; i < 25; ++i) shuffled.row(i) = x.row(order[i]);
  CHECK(sq_norm(shuffled, 5u) == doctest::Approx(sq_norm(x, 5u)).epsilon(1e-12));

  CubeSample swapped = x;
  swapped.col(0).swap(swapped.col(2));  // sigma = (1 3)
  CHECK(sq_norm(swapped, 0b001u) == doctest::Approx(sq_norm(x, 0b100u)).epsilon(1e-12));
  CHECK(sq_norm(swapped, 0b011u) == doctest::Approx(sq_norm(x, 0b110u)).epsilon(1e-12));
}

TEST_CASE("pillow moments formulas") {
  CHECK(pillow_moments(1).first == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(pillow_moments(1).second == doctest::Approx(2.0 / 90.0).epsilon(1e-15));
  CHECK(pillow_moments(2).first == doctest::Approx(1.0 / 36.0).epsilon(1e-15));
  CHECK(pillow_moments(2).second == doctest::Approx(2.0 / 8100.0).epsilon(1e-15));
  CHECK(pillow_moments(3).second == doctest::Approx(2.0 / 729000.0).epsilon(1e-15));
  CHECK_THROWS(pillow_moments(0));
}

TEST_CASE("finite-sample mean of sq_norm is exact") {
  Rng rng(13);
  const int reps = 3000, n = 50;
  double acc1 = 0.0, acc2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    const CubeSample x = uniform_cube_sample(n, 2, rng);
    acc1 += sq_norm(x, 1u);
    acc2 += sq_norm(x, 3u);
  }
  const double se1 = std::sqrt(2.0 / 90.0 / reps);
  const double se2 = std::sqrt(2.0 / 8100.0 / reps);
  CHECK(std::fabs(acc1 / reps - 1.0 / 6.0) < 4.0 * se1);
  CHECK(std::fabs(acc2 / reps - 1.0 / 36.0) < 4.0 * se2);
}

TEST_CASE("kl_sample matches the limit moments") {
  Rng rng(17);
  const int draws = 20000;
  double s1 = 0.0;
  for (int i = 0; i < draws; ++i) s1 += kl_sample(1, 64, rng);
  const double se = std::sqrt(2.0 / 90.0 / draws);
  CHECK(std::fabs(s1 / draws - 1.0 / 6.0) < 3.0 * se);

  double m2 = 0.0, v2 = 0.0;
  std::vector<double> xs(draws);
  for (int i = 0; i < draws; ++i) xs[i] = kl_sample(2, 64, rng);
  for (double v : xs) m2 += v;
  m2 /= draws;
  for (double v : xs) v2 += (v - m2) * (v - m2);
  v2 /= draws - 1;
  CHECK(m2 == doctest::Approx(1.0 / 36.0).epsilon(0.02));
  CHECK(v2 == doctest::Approx(2.0 / 8100.0).epsilon(0.1));
}

TEST_CASE("validate_cube_sample rejects out-of-range entries") {
  CubeSample bad(2, 2);
  bad << 0.1, 0.2, 1.1, 0.3;
  CHECK_THROWS(validate_cube_sample(bad));
  CubeSample ok(2, 2);
  ok << 0.0, 1.0, 0.5, 0.25;
  CHECK_NOTHROW(validate_cube_sample(ok));
}
