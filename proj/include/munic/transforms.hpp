#pragma once

// The five reductions to uniformity on the hypercube, plus the matching
// null-model samplers used for calibration.

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "munic/pillow.hpp"
#include "munic/rng.hpp"

namespace munic {

// ---- sphere machinery (S^p embedded in R^(p+1)) ----

// Polar map: angles (phi_1..phi_p) in [0,pi]^(p-1) x [0,2pi) to a unit
// vector in R^(p+1).
Eigen::VectorXd polar_forward(const Eigen::VectorXd& angles);

// Inverse polar peeling; unit-norm input required. Angles past a
// vanishing tail norm are set to 0.
Eigen::VectorXd polar_inverse(const Eigen::VectorXd& z);

// CDF of the density sin^k(phi) / int_0^pi sin^k on [0, pi].
double sin_power_cdf(int k, double phi);

// Inverse of sin_power_cdf in phi, to 1e-12.
double sin_power_quantile(int k, double u);

// M_p: unit vector in R^(p+1) -> [0,1]^p. Uniform on the sphere iff the
// image is uniform on the cube.
Eigen::VectorXd sphere_to_cube_point(const Eigen::VectorXd& z);

// Inverse of M_p.
Eigen::VectorXd cube_to_sphere_point(const Eigen::VectorXd& u);

// Row-wise M_p on an n x (p+1) matrix of unit rows (tolerance 1e-6 on the
// norms; throws otherwise).
CubeSample sphere_to_cube(const Eigen::MatrixXd& sphere_sample);

CubeSample uniform_cube_sample(int n, int p, Rng& rng);
Eigen::MatrixXd uniform_sphere_sample(int n, int ambient_dim, Rng& rng);

// ---- normality ----

struct NormalityContext {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;      // 1/n denominator
  Eigen::MatrixXd whitener;        // symmetric inverse square root of covariance
  Eigen::MatrixXd sqrt_covariance; // symmetric square root, for null resampling
};

NormalityContext fit_normality_context(const Eigen::MatrixXd& sample);

// Phi_p(Sigma^-1/2 (Z_i - mu)) with mu, Sigma fitted on the sample.
std::pair<CubeSample, NormalityContext> normality_transform(const Eigen::MatrixXd& sample);

// Draw Z* ~ N(mu_hat, Sigma_hat), refit on the draw, retransform: the
// parameter-estimation effect stays inside the null table.
CubeSample normality_null_sample(const NormalityContext& ctx, int n, Rng& rng);

// ---- isotropy / elliptical symmetry ----

enum class Centering { known_zero, estimated };

// (M_{p-1}(Z_i/|Z_i|), rank(|Z_i|)/(n+1)); ties flagged in `warnings`.
CubeSample isotropy_transform(const Eigen::MatrixXd& sample, Centering centering,
                              std::vector<std::string>* warnings = nullptr);

// i.i.d. uniform matrix with the last column replaced by its ranks/(n+1).
// Breaks column exchangeability; never collapse calibration by cardinality.
CubeSample isotropy_null_sample(int n, int p, Rng& rng);

// Whiten by (Z^T Z / n)^(-1/2) (optionally centering first), then apply
// the isotropy reduction.
CubeSample ellipticity_transform(const Eigen::MatrixXd& sample, Centering centering,
                                 std::vector<std::string>* warnings = nullptr);

// ---- independence ----

// Columnwise ranks / (n+1); ties broken by row order and flagged.
CubeSample independence_transform(const Eigen::MatrixXd& sample,
                                  std::vector<std::string>* warnings = nullptr);

// p independent uniform column permutations of {1..n}/(n+1).
CubeSample independence_null_sample(int n, int p, Rng& rng);

}  // namespace munic
