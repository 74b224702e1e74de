#pragma once

// Squared L2 norms of the zero-marginal components of the empirical
// process for hypercube samples, their exact moments, and draws from the
// limiting law via truncated Karhunen-Loeve expansion.

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "munic/rng.hpp"
#include "munic/subset.hpp"

namespace munic {

// An n x p sample in the unit hypercube, rows = observations.
using CubeSample = Eigen::MatrixXd;

// Throws unless every entry lies in [0,1] and 1 <= p <= 20.
void validate_cube_sample(const CubeSample& sample);

// Per-coordinate factor of the closed-form squared norm:
// (x^2 + y^2)/2 - max(x,y) + 1/3. Symmetric, zero mean in each argument
// over [0,1].
inline double bridge_kernel(double x, double y) {
  return 0.5 * (x * x + y * y) - (x > y ? x : y) + 1.0 / 3.0;
}

// Squared norm of the H-component of the empirical process
// (sqrt(n)-scaled convention): (1/n) sum_{a,b} prod_{j in H} k(X_aj, X_bj).
double sq_norm(const CubeSample& sample, CoordSubset mask);

using SqNormVector = std::vector<double>;  // aligned with family.masks

// One sq_norm per family subset, sharing the p per-coordinate kernel
// matrices across subsets. Bitwise identical to per-subset sq_norm.
SqNormVector sq_norms_all(const CubeSample& sample, const SubsetFamily& family);

// (mean, variance) of ||b_H||^2 in the limit: (6^-h, 2 * 90^-h).
std::pair<double, double> pillow_moments(int h);

// One draw of the truncated KL expansion of ||b_H||^2 with a
// deterministic tail-mean correction (the sampled mean is exact).
double kl_sample(int h, int n_max, Rng& rng);

}  // namespace munic
