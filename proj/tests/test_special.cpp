#include "doctest.h"

#include <cmath>
#include <initializer_list>

#include "munic/special.hpp"

using namespace munic;

TEST_CASE("regularized incomplete gamma against reference values") {
  CHECK(gamma_p(1.25, 0.5) == doctest::Approx(0.28378995266531293).epsilon(1e-12));
  CHECK(gamma_q(2.5, 7.0) == doctest::Approx(0.01560941610026691).epsilon(1e-12));
  CHECK(gamma_p(3.0, 0.0) == 0.0);
  CHECK(gamma_q(3.0, 0.0) == 1.0);
  for (double a : {0.3, 1.0, 2.5, 10.0})
    for (double x : {0.01, 0.5, 1.0, 4.0, 25.0})
      CHECK(gamma_p(a, x) + gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("gamma_p_inverse round-trips") {
  for (double a : {0.6, 1.25, 3.0, 12.5})
    for (double u : {1e-6, 0.05, 0.5, 0.95, 0.999}) {
      const double x = gamma_p_inverse(a, u);
      CHECK(gamma_p(a, x) == doctest::Approx(u).epsilon(1e-10));
    }
}

TEST_CASE("gamma_cdf uses the rate convention") {
  CHECK(gamma_cdf(0.2, 1.25, 7.5) == doctest::Approx(0.6941503705541809).epsilon(1e-12));
  CHECK(gamma_cdf(0.0, 1.25, 7.5) == 0.0);
}

TEST_CASE("chi-square quantiles and tails") {
  CHECK(chi2_quantile(0.95, 1.0) == doctest::Approx(3.841458820694124).epsilon(1e-11));
  CHECK(chi2_quantile(0.5, 1.0) == doctest::Approx(0.454936423119572).epsilon(1e-11));
  CHECK(chi2_quantile(0.99, 7.0) == doctest::Approx(18.475306906582357).epsilon(1e-11));
  CHECK(chi2_sf(14.067140449340169, 7.0) == doctest::Approx(0.05).epsilon(1e-11));
  for (double dof : {1.0, 3.0, 7.0})
    for (double x : {0.2, 1.0, 5.0})
      CHECK(chi2_cdf(x, dof) + chi2_sf(x, dof) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("normal CDF and quantile") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-14));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-12));
  for (double u : {1e-8, 0.01, 0.3, 0.5, 0.77, 0.9999})
    CHECK(normal_cdf(normal_quantile(u)) == doctest::Approx(u).epsilon(1e-12));
}

TEST_CASE("Kolmogorov upper tail") {
  CHECK(kolmogorov_sf(0.5) == doctest::Approx(0.9639452436648751).epsilon(1e-10));
  CHECK(kolmogorov_sf(1.36) == doctest::Approx(0.049485876755377876).epsilon(1e-10));
  CHECK(kolmogorov_sf(0.0) == 1.0);
  CHECK(kolmogorov_sf(10.0) < 1e-15);
}
