#include "doctest.h"

#include <cmath>

#include "munic/combiners.hpp"
#include "munic/special.hpp"

using namespace munic;

TEST_CASE("m threshold closed form") {
  CHECK(m_threshold(0.05, 1) == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(m_threshold(0.05, 7) == doctest::Approx(1.0 - std::pow(0.95, 1.0 / 7.0)).epsilon(1e-14));
  CHECK(m_threshold(0.05, 7) == doctest::Approx(0.0073008).epsilon(1e-4));
  CHECK(m_threshold(1e-9, 3) < 1e-9);
  CHECK_THROWS(m_threshold(0.0, 3));
  CHECK_THROWS(m_threshold(0.05, 0));
}

TEST_CASE("m test decisions") {
  const MTestResult r = m_test({0.5, 0.009, 0.3, 0.8, 0.2, 0.9, 0.4}, 0.05);
  CHECK(r.statistic == doctest::Approx(0.009));
  CHECK_FALSE(r.reject);  // 0.009 > 0.0073
  const MTestResult r2 = m_test({0.5, 0.005, 0.3, 0.8, 0.2, 0.9, 0.4}, 0.05);
  CHECK(r2.reject);
  CHECK_THROWS(m_test({}, 0.05));
}

TEST_CASE("s test single subset reduces to the chi-square-1 p-value") {
  for (double p : {0.03, 0.2, 0.5, 0.97}) {
    const STestResult r = s_test({p}, 0.05);
    CHECK(r.pvalue == doctest::Approx(p).epsilon(1e-10));
    CHECK(r.reject == (p < 0.05));
  }
}

TEST_CASE("s statistic is the sum of chi-square-1 quantiles") {
  const STestResult r = s_test({0.5, 0.1, 0.9}, 0.05);
  const double want = chi2_quantile(0.5, 1.0) + chi2_quantile(0.9, 1.0) + chi2_quantile(0.1, 1.0);
  CHECK(r.statistic == doctest::Approx(want).epsilon(1e-12));
  CHECK(r.pvalue == doctest::Approx(chi2_sf(want, 3.0)).epsilon(1e-12));
  // median of chi-square with one degree of freedom
  CHECK(chi2_quantile(0.5, 1.0) == doctest::Approx(0.454936423119572).epsilon(1e-11));
}

TEST_CASE("s test boundary p-values") {
  const STestResult top = s_test({1.0, 1.0}, 0.05);
  CHECK(top.statistic == 0.0);
  CHECK(top.pvalue == doctest::Approx(1.0));
  CHECK_FALSE(top.saturated);
  const STestResult floor = s_test({0.0, 0.5}, 0.05);
  CHECK(floor.saturated);
  CHECK(floor.reject);
  CHECK(std::isfinite(floor.statistic));
}

TEST_CASE("report serializes the contract fields") {
  TestReport rep;
  rep.kind = TestKind::uniform;
  rep.n = 10;
  rep.p = 2;
  rep.family = SubsetFamily::resolve(SubsetFamily::Kind::full, 2);
  rep.per_subset_stats = {0.1, 0.2, 0.01};
  rep.per_subset_pvalues = {0.5, 0.2, 0.7};
  rep.m = m_test(rep.per_subset_pvalues, rep.alpha);
  rep.s = s_test(rep.per_subset_pvalues, rep.alpha);
  const std::string j = rep.to_json();
  for (const char* key : {"\"test_kind\"", "\"n\"", "\"p\"", "\"alpha\"", "\"family\"",
                          "\"subsets\"", "\"mask\"", "\"sq_norm\"", "\"p_value\"", "\"m\"",
                          "\"stat\"", "\"threshold\"", "\"reject\"", "\"s\"", "\"warnings\""})
    CHECK(j.find(key) != std::string::npos);
}
