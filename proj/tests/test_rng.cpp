#include "doctest.h"

#include <cmath>
#include <vector>

#include "munic/rng.hpp"

using namespace munic;

TEST_CASE("identical seeds give identical streams") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("substreams are independent of draw order on the parent") {
  const Rng parent(7);
  Rng child_before = parent.substream(3, 9);
  Rng parent_copy(7);
  parent_copy.next_u64();
  Rng child_after = parent_copy.substream(3, 9);
  // substream derivation only reads the key, never the state
  for (int i = 0; i < 10; ++i) CHECK(child_before.next_u64() == child_after.next_u64());
  CHECK(parent.substream(3, 9).next_u64() != parent.substream(3, 10).next_u64());
  CHECK(parent.substream(3, 9).next_u64() != parent.substream(4, 9).next_u64());
}

TEST_CASE("uniform stays in [0,1) with the right moments") {
  Rng rng(1);
  double sum = 0.0, sumsq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(sumsq / n - (sum / n) * (sum / n) == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("normal moments") {
  Rng rng(2);
  double s1 = 0, s2 = 0, s4 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  CHECK(s1 / n == doctest::Approx(0.0).epsilon(0.02).scale(1.0));
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("gamma and beta moments") {
  Rng rng(3);
  const int n = 100000;
  for (double shape : {0.5, 2.5}) {
    double s1 = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
      const double g = rng.gamma(shape);
      s1 += g;
      s2 += g * g;
    }
    CHECK(s1 / n == doctest::Approx(shape).epsilon(0.03));
    CHECK(s2 / n - (s1 / n) * (s1 / n) == doctest::Approx(shape).epsilon(0.05));
  }
  double b = 0;
  for (int i = 0; i < n; ++i) b += rng.beta(2.0, 3.0);
  CHECK(b / n == doctest::Approx(0.4).epsilon(0.02));
}
