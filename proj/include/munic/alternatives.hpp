#pragma once

// Samplers for the alternative distributions used in the power studies.

#include <Eigen/Dense>
#include <map>
#include <string>

#include "munic/rng.hpp"

namespace munic {

enum class TargetSpace { sphere, cube, euclidean };

struct AlternativeSpec {
  enum class Family {
    vmf,
    vmf_mixture,
    projected_normal_diag,
    projected_ma,
    projected_equicorr,
    copula_normal,
    copula_clayton,
    copula_gumbel,
    copula_bp_mixture,
    mixture_shift,
    mixture_B,
    multivariate_t,
    skew_normal,
    radial_power,
    shifted_bernoulli,
    equicorr_mixture,
    ma_product,
    equicorr_normal,
  };

  Family family = Family::vmf;
  std::map<std::string, double> params;  // kappa, rho, theta, a, P, mu, df, alpha_shape

  static Family family_from_string(const std::string& s);
  static std::string family_to_string(Family f);
  TargetSpace target_space() const;
  double param(const std::string& name) const;            // throws when missing
  double param_or(const std::string& name, double d) const;
  void validate() const;  // family-specific parameter ranges
};

// n i.i.d. von Mises-Fisher draws on S^p (ambient R^(p+1)).
Eigen::MatrixXd sample_vmf(int p_dim, const Eigen::VectorXd& mu_direction, double kappa, int n,
                           Rng& rng);

// Equal-weight vMF mixture with directions e1 and e2.
Eigen::MatrixXd sample_vmf_mixture(int p_dim, double kappa, int n, Rng& rng);

enum class ProjectedCov { diag_kappa, shift_cyclic, equicorr };

// Normal vector in R^(p+1) with the given covariance, normalized onto S^p.
Eigen::MatrixXd sample_projected(int p_dim, ProjectedCov cov, double param, int n, Rng& rng);

enum class CopulaKind { normal, clayton, gumbel, bp };

// Cube samples with uniform marginals and the stated dependence. BP is the
// tridimensional construction U_1 = U_2 + U_3 mod 1 (needs p >= 3).
Eigen::MatrixXd sample_copula(CopulaKind kind, double param, int p_dim, int n, Rng& rng);

// Inverse of M_p applied row-wise: cube sample -> sphere sample in R^(p+1).
Eigen::MatrixXd pullback_to_sphere(const Eigen::MatrixXd& cube_sample);

// Componentwise standard normal quantile (entries must be in (0,1)).
Eigen::MatrixXd pullback_to_euclidean(const Eigen::MatrixXd& cube_sample);

// Euclidean-space alternatives (mixtures, multivariate t, radial powers,
// moving-average maps, skew normals, ...).
Eigen::MatrixXd sample_euclidean_alternative(const AlternativeSpec& spec, int p_dim, int n,
                                             Rng& rng);

// Dispatch on spec.family; `p_dim` is the cube/Euclidean dimension (for
// sphere families the ambient dimension is p_dim + 1).
Eigen::MatrixXd sample_alternative(const AlternativeSpec& spec, int p_dim, int n, Rng& rng);

}  // namespace munic
