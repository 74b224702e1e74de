#include "doctest.h"

#include <bit>
#include <cmath>
#include <vector>

#include "munic/measure.hpp"
#include "munic/rng.hpp"

using namespace munic;

namespace {

DiscreteProductSpace make_space(const std::vector<int>& sizes, Rng& rng) {
  DiscreteProductSpace sp;
  sp.axis_sizes = sizes;
  for (int k : sizes) {
    std::vector<double> probs(static_cast<std::size_t>(k));
    double total = 0.0;
    for (auto& v : probs) {
      v = 0.1 + rng.uniform();
      total += v;
    }
    for (auto& v : probs) v /= total;
    sp.axis_probs.push_back(std::move(probs));
  }
  sp.validate();
  return sp;
}

DiscreteSignedMeasure random_measure(const DiscreteProductSpace& sp, Rng& rng) {
  DiscreteSignedMeasure mu = DiscreteSignedMeasure::zero(sp);
  for (auto& v : mu.cell_mass) v = rng.uniform(-1.0, 1.0);
  return mu;
}

double max_cell_diff(const DiscreteSignedMeasure& a, const DiscreteSignedMeasure& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.cell_mass.size(); ++i)
    worst = std::max(worst, std::fabs(a.cell_mass[i] - b.cell_mass[i]));
  return worst;
}

// Independent construction of the H-component by inclusion-exclusion over
// the marginals: mu_H(A) = sum_{G subset H} (-1)^{#(H\G)}
// [prod_{j in H\G} P_j(A_j)] * marginal_G(A_G).
double moebius_component_cell(const DiscreteSignedMeasure& mu, CoordSubset H,
                              const std::vector<int>& idx_H) {
  const int p = mu.space.dims();
  std::vector<int> axes;
  for (int j = 0; j < p; ++j)
    if (H & (1u << j)) axes.push_back(j);
  double total = 0.0;
  const auto h = axes.size();
  for (CoordSubset g = 0; g < (1u << h); ++g) {
    CoordSubset G = 0;
    double prob_factor = 1.0;
    std::vector<int> idx_G;
    for (std::size_t t = 0; t < h; ++t) {
      if (g & (1u << t)) {
        G |= (1u << axes[t]);
        idx_G.push_back(idx_H[t]);
      } else {
        prob_factor *= mu.space.axis_probs[static_cast<std::size_t>(axes[t])]
                                          [static_cast<std::size_t>(idx_H[t])];
      }
    }
    const double parity = ((h - static_cast<std::size_t>(std::popcount(g))) % 2 == 0) ? 1.0 : -1.0;
    const double marg = (G == 0) ? mu.total_mass() : mu.marginal_onto(G).at(idx_G);
    total += parity * prob_factor * marg;
  }
  return total;
}

}  // namespace

TEST_CASE("product measure decomposes into the empty component only") {
  Rng rng(11);
  const DiscreteProductSpace sp = make_space({2, 2}, rng);
  const double c = 2.5;
  const auto comps = decompose(DiscreteSignedMeasure::product(sp, c));
  CHECK(comps.at(0).measure.cell_mass[0] == doctest::Approx(c).epsilon(1e-14));
  for (CoordSubset m = 1; m <= 3; ++m)
    for (double v : comps.at(m).measure.cell_mass) CHECK(std::fabs(v) < 1e-14);
}

TEST_CASE("point mass on a 2x2 uniform space matches the explicit product form") {
  DiscreteProductSpace sp;
  sp.axis_sizes = {2, 2};
  sp.axis_probs = {{0.5, 0.5}, {0.5, 0.5}};
  DiscreteSignedMeasure delta = DiscreteSignedMeasure::zero(sp);
  delta.at({0, 1}) = 1.0;  // point mass at (a, b) = (0, 1)
  const auto comps = decompose(delta);
  // mu_{1,2}(A1 x A2) = (delta_a(A1) - P1(A1)) (delta_b(A2) - P2(A2))
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double want = ((i == 0 ? 1.0 : 0.0) - 0.5) * ((j == 1 ? 1.0 : 0.0) - 0.5);
      CHECK(comps.at(3).measure.at({i, j}) == doctest::Approx(want).epsilon(1e-14));
    }
  // singleton components are the centered marginals
  CHECK(comps.at(1).measure.at({0}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(comps.at(2).measure.at({1}) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("round-trip and zero marginals on random measures") {
  Rng rng(21);
  for (int rep = 0; rep < 30; ++rep) {
    const DiscreteProductSpace sp = make_space({2, 3, 2}, rng);
    const DiscreteSignedMeasure mu = random_measure(sp, rng);
    const auto comps = decompose(mu);
    CHECK(comps.size() == 8);
    const double scale = 1.0 + mu.total_abs_mass();
    CHECK(max_cell_diff(reconstruct(comps, sp), mu) < 1e-12 * scale);
    for (const auto& [mask, comp] : comps) {
      if (mask == 0) continue;
      const int h = subset_cardinality(mask);
      // summing out any one axis of a zm component gives zero everywhere
      for (int t = 0; t < h; ++t) {
        // keep every restricted axis except the t-th
        CoordSubset keep = 0;
        for (int j = 0; j < h; ++j)
          if (j != t) keep |= (1u << j);
        const auto folded = comp.measure.marginal_onto(keep);
        for (double v : folded.cell_mass) CHECK(std::fabs(v) < 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("components match the inclusion-exclusion construction") {
  Rng rng(31);
  const DiscreteProductSpace sp = make_space({3, 2, 3}, rng);
  const DiscreteSignedMeasure mu = random_measure(sp, rng);
  const auto comps = decompose(mu);
  for (const auto& [mask, comp] : comps) {
    if (mask == 0) continue;
    const int h = subset_cardinality(mask);
    std::vector<int> idx(static_cast<std::size_t>(h), 0);
    const auto& rsp = comp.measure.space;
    bool done = false;
    while (!done) {
      const double want = moebius_component_cell(mu, mask, idx);
      CHECK(comp.measure.at(idx) == doctest::Approx(want).epsilon(1e-11).scale(1.0));
      int d = h - 1;
      for (; d >= 0; --d) {
        if (++idx[static_cast<std::size_t>(d)] < rsp.axis_sizes[static_cast<std::size_t>(d)]) break;
        idx[static_cast<std::size_t>(d)] = 0;
      }
      done = (d < 0);
    }
  }
}

TEST_CASE("decompose is linear") {
  Rng rng(41);
  const DiscreteProductSpace sp = make_space({2, 2, 3}, rng);
  const DiscreteSignedMeasure a = random_measure(sp, rng);
  const DiscreteSignedMeasure b = random_measure(sp, rng);
  DiscreteSignedMeasure sum = a;
  for (std::size_t i = 0; i < sum.cell_mass.size(); ++i)
    sum.cell_mass[i] = 2.0 * a.cell_mass[i] - 3.0 * b.cell_mass[i];
  const auto ca = decompose(a);
  const auto cb = decompose(b);
  const auto cs = decompose(sum);
  for (const auto& [mask, comp] : cs)
    for (std::size_t i = 0; i < comp.measure.cell_mass.size(); ++i)
      CHECK(comp.measure.cell_mass[i] ==
            doctest::Approx(2.0 * ca.at(mask).measure.cell_mass[i] -
                            3.0 * cb.at(mask).measure.cell_mass[i])
                .epsilon(1e-11)
                .scale(1.0));
}

TEST_CASE("is_k_null classifies components and simple cases") {
  Rng rng(51);
  const DiscreteProductSpace sp = make_space({2, 3, 2}, rng);
  CHECK(is_k_null(DiscreteSignedMeasure::zero(sp), 3));

  DiscreteSignedMeasure delta = DiscreteSignedMeasure::zero(sp);
  delta.at({1, 2, 0}) = 1.0;
  CHECK_FALSE(is_k_null(delta, 1));

  const auto comps = decompose(random_measure(sp, rng));
  for (const auto& [mask, comp] : comps) {
    if (mask == 0) continue;
    const int h = subset_cardinality(mask);
    CHECK(is_k_null(comp.measure, h - 1));
  }
}

TEST_CASE("decompose rejects bad inputs") {
  DiscreteProductSpace sp;
  sp.axis_sizes = {2, 2};
  sp.axis_probs = {{1.0, 0.0}, {0.5, 0.5}};
  DiscreteSignedMeasure mu = DiscreteSignedMeasure::zero(sp);
  mu.at({0, 0}) = 1.0;
  CHECK_THROWS(decompose(mu));

  Rng rng(61);
  const DiscreteProductSpace ok = make_space({2, 2}, rng);
  DiscreteSignedMeasure bad = DiscreteSignedMeasure::zero(ok);
  bad.cell_mass[0] = std::nan("");
  CHECK_THROWS(decompose(bad));
}
