#include "munic/alternatives.hpp"

#include <cmath>
#include <stdexcept>

#include "munic/special.hpp"
#include "munic/transforms.hpp"

namespace munic {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
}

AlternativeSpec::Family AlternativeSpec::family_from_string(const std::string& s) {
  if (s == "vmf") return Family::vmf;
  if (s == "vmf_mixture") return Family::vmf_mixture;
  if (s == "projected_normal_diag") return Family::projected_normal_diag;
  if (s == "projected_ma") return Family::projected_ma;
  if (s == "projected_equicorr") return Family::projected_equicorr;
  if (s == "copula_normal") return Family::copula_normal;
  if (s == "copula_clayton") return Family::copula_clayton;
  if (s == "copula_gumbel") return Family::copula_gumbel;
  if (s == "copula_bp_mixture") return Family::copula_bp_mixture;
  if (s == "mixture_shift") return Family::mixture_shift;
  if (s == "mixture_B") return Family::mixture_B;
  if (s == "multivariate_t") return Family::multivariate_t;
  if (s == "skew_normal") return Family::skew_normal;
  if (s == "radial_power") return Family::radial_power;
  if (s == "shifted_bernoulli") return Family::shifted_bernoulli;
  if (s == "equicorr_mixture") return Family::equicorr_mixture;
  if (s == "ma_product") return Family::ma_product;
  if (s == "equicorr_normal") return Family::equicorr_normal;
  throw std::invalid_argument("unknown alternative family '" + s + "'");
}

std::string AlternativeSpec::family_to_string(Family f) {
  switch (f) {
    case Family::vmf: return "vmf";
    case Family::vmf_mixture: return "vmf_mixture";
    case Family::projected_normal_diag: return "projected_normal_diag";
    case Family::projected_ma: return "projected_ma";
    case Family::projected_equicorr: return "projected_equicorr";
    case Family::copula_normal: return "copula_normal";
    case Family::copula_clayton: return "copula_clayton";
    case Family::copula_gumbel: return "copula_gumbel";
    case Family::copula_bp_mixture: return "copula_bp_mixture";
    case Family::mixture_shift: return "mixture_shift";
    case Family::mixture_B: return "mixture_B";
    case Family::multivariate_t: return "multivariate_t";
    case Family::skew_normal: return "skew_normal";
    case Family::radial_power: return "radial_power";
    case Family::shifted_bernoulli: return "shifted_bernoulli";
    case Family::equicorr_mixture: return "equicorr_mixture";
    case Family::ma_product: return "ma_product";
    case Family::equicorr_normal: return "equicorr_normal";
  }
  return "?";
}

TargetSpace AlternativeSpec::target_space() const {
  switch (family) {
    case Family::vmf:
    case Family::vmf_mixture:
    case Family::projected_normal_diag:
    case Family::projected_ma:
    case Family::projected_equicorr:
      return TargetSpace::sphere;
    case Family::copula_normal:
    case Family::copula_clayton:
    case Family::copula_gumbel:
    case Family::copula_bp_mixture:
      return TargetSpace::cube;
    default:
      return TargetSpace::euclidean;
  }
}

double AlternativeSpec::param(const std::string& name) const {
  const auto it = params.find(name);
  if (it == params.end())
    throw std::invalid_argument("alternative '" + family_to_string(family) +
                                "' needs parameter '" + name + "'");
  return it->second;
}

double AlternativeSpec::param_or(const std::string& name, double d) const {
  const auto it = params.find(name);
  return it == params.end() ? d : it->second;
}

void AlternativeSpec::validate() const {
  switch (family) {
    case Family::vmf:
    case Family::vmf_mixture:
    case Family::projected_normal_diag:
    case Family::projected_ma:
      if (param("kappa") < 0.0) throw std::invalid_argument("kappa must be >= 0");
      break;
    case Family::projected_equicorr:
    case Family::copula_normal:
      if (std::fabs(param("rho")) >= 1.0) throw std::invalid_argument("|rho| must be < 1");
      break;
    case Family::copula_clayton:
      if (!(param("theta") > 0.0)) throw std::invalid_argument("Clayton needs theta > 0");
      break;
    case Family::copula_gumbel:
      if (!(param("theta") >= 1.0)) throw std::invalid_argument("Gumbel needs theta >= 1");
      break;
    case Family::copula_bp_mixture:
    case Family::mixture_shift:
    case Family::mixture_B:
    case Family::shifted_bernoulli:
    case Family::equicorr_mixture: {
      const double P = param("P");
      if (P < 0.0 || P > 1.0) throw std::invalid_argument("P must lie in [0,1]");
      break;
    }
    case Family::multivariate_t:
      if (!(param("df") > 0.0)) throw std::invalid_argument("multivariate t needs df > 0");
      break;
    case Family::radial_power:
      if (!(param("theta") > 0.0)) throw std::invalid_argument("radial power needs theta > 0");
      break;
    case Family::skew_normal:
    case Family::ma_product:
    case Family::equicorr_normal:
      break;
  }
}

namespace {

// Tangent-normal accept-reject (Ulrich/Wood) for the cosine w against the
// mean direction; d is the ambient dimension.
double vmf_cosine(int d, double kappa, Rng& rng) {
  const double dm1 = static_cast<double>(d - 1);
  const double b = (-2.0 * kappa + std::sqrt(4.0 * kappa * kappa + dm1 * dm1)) / dm1;
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + dm1 * std::log(1.0 - x0 * x0);
  for (;;) {
    const double z = rng.beta(0.5 * dm1, 0.5 * dm1);
    const double w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    const double u = rng.uniform_open();
    if (kappa * w + dm1 * std::log(1.0 - x0 * w) - c >= std::log(u)) return w;
  }
}

Eigen::MatrixXd sample_vmf_at_e1(int d, double kappa, int n, Rng& rng) {
  Eigen::MatrixXd out(n, d);
  for (int i = 0; i < n; ++i) {
    if (kappa == 0.0) {
      out.row(i) = uniform_sphere_sample(1, d, rng).row(0);
      continue;
    }
    const double w = vmf_cosine(d, kappa, rng);
    const Eigen::MatrixXd v = uniform_sphere_sample(1, d - 1, rng);
    out(i, 0) = w;
    out.row(i).tail(d - 1) = std::sqrt(std::max(0.0, 1.0 - w * w)) * v.row(0);
  }
  return out;
}

// Householder reflection mapping e1 onto mu.
void rotate_e1_to(Eigen::MatrixXd& sample, const Eigen::VectorXd& mu) {
  const auto d = mu.size();
  Eigen::VectorXd v = Eigen::VectorXd::Unit(d, 0) - mu;
  const double norm = v.norm();
  if (norm < 1e-12) return;  // mu is already e1
  v /= norm;
  sample -= 2.0 * (sample * v) * v.transpose();
}

// Equicorrelated normal row: sqrt(1-rho)(g - gbar 1) + sqrt(1+(d-1)rho) gbar 1.
Eigen::VectorXd equicorr_normal_row(int d, double rho, Rng& rng) {
  Eigen::VectorXd g(d);
  for (int j = 0; j < d; ++j) g[j] = rng.normal();
  const double gbar = g.mean();
  const double a = std::sqrt(1.0 + (d - 1) * rho);
  const double b = std::sqrt(1.0 - rho);
  return b * (g.array() - gbar).matrix() + (a * gbar) * Eigen::VectorXd::Ones(d);
}

// Positive alpha-stable draw (Chambers-Mallows-Stuck), 0 < alpha < 1.
double positive_stable(double alpha, Rng& rng) {
  const double v = rng.uniform_open() * kPi;
  const double e = rng.exponential();
  const double t1 = std::sin(alpha * v) / std::pow(std::sin(v), 1.0 / alpha);
  const double t2 = std::pow(std::sin((1.0 - alpha) * v) / e, (1.0 - alpha) / alpha);
  return t1 * t2;
}

}  // namespace

Eigen::MatrixXd sample_vmf(int p_dim, const Eigen::VectorXd& mu_direction, double kappa, int n,
                           Rng& rng) {
  const int d = p_dim + 1;
  if (mu_direction.size() != d)
    throw std::invalid_argument("sample_vmf: mean direction dimension mismatch");
  if (std::fabs(mu_direction.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("sample_vmf: mean direction must have unit norm");
  if (kappa < 0.0) throw std::invalid_argument("sample_vmf: kappa must be >= 0");
  Eigen::MatrixXd out = sample_vmf_at_e1(d, kappa, n, rng);
  if (kappa > 0.0) rotate_e1_to(out, mu_direction);
  return out;
}

Eigen::MatrixXd sample_vmf_mixture(int p_dim, double kappa, int n, Rng& rng) {
  const int d = p_dim + 1;
  const Eigen::VectorXd mu1 = Eigen::VectorXd::Unit(d, 0);
  const Eigen::VectorXd mu2 = Eigen::VectorXd::Unit(d, 1);
  Eigen::MatrixXd out(n, d);
  for (int i = 0; i < n; ++i) {
    const bool second = rng.uniform() < 0.5;
    Eigen::MatrixXd row = sample_vmf(p_dim, second ? mu2 : mu1, kappa, 1, rng);
    out.row(i) = row.row(0);
  }
  return out;
}

Eigen::MatrixXd sample_projected(int p_dim, ProjectedCov cov, double param, int n, Rng& rng) {
  const int d = p_dim + 1;
  Eigen::MatrixXd out(n, d);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd z(d);
    switch (cov) {
      case ProjectedCov::diag_kappa: {
        if (param < 0.0) throw std::invalid_argument("projected diag needs kappa >= 0");
        for (int j = 0; j < d; ++j) z[j] = rng.normal();
        z[0] *= std::sqrt(1.0 + param);
        break;
      }
      case ProjectedCov::shift_cyclic: {
        // (Z_{p+1} + kappa Z_1, (Z_i + kappa Z_{i+1})_{i=1..p})
        Eigen::VectorXd g(d);
        for (int j = 0; j < d; ++j) g[j] = rng.normal();
        z[0] = g[d - 1] + param * g[0];
        for (int j = 1; j < d; ++j) z[j] = g[j - 1] + param * g[j];
        break;
      }
      case ProjectedCov::equicorr: {
        if (param <= -1.0 / static_cast<double>(d - 1))
          throw std::invalid_argument("projected equicorr covariance is not PSD");
        z = equicorr_normal_row(d, param, rng);
        break;
      }
    }
    const double norm = z.norm();
    out.row(i) = (z / norm).transpose();
  }
  return out;
}

Eigen::MatrixXd sample_copula(CopulaKind kind, double param, int p_dim, int n, Rng& rng) {
  Eigen::MatrixXd out(n, p_dim);
  switch (kind) {
    case CopulaKind::normal: {
      if (std::fabs(param) >= 1.0) throw std::invalid_argument("normal copula needs |rho| < 1");
      if (p_dim > 1 && param <= -1.0 / static_cast<double>(p_dim - 1))
        throw std::invalid_argument("normal copula: equicorrelation is not PSD");
      for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd z = equicorr_normal_row(p_dim, param, rng);
        for (int j = 0; j < p_dim; ++j) out(i, j) = normal_cdf(z[j]);
      }
      break;
    }
    case CopulaKind::clayton: {
      if (!(param > 0.0)) throw std::invalid_argument("Clayton copula needs theta > 0");
      for (int i = 0; i < n; ++i) {
        const double frailty = rng.gamma(1.0 / param);
        for (int j = 0; j < p_dim; ++j)
          out(i, j) = std::pow(1.0 + rng.exponential() / frailty, -1.0 / param);
      }
      break;
    }
    case CopulaKind::gumbel: {
      if (!(param >= 1.0)) throw std::invalid_argument("Gumbel copula needs theta >= 1");
      for (int i = 0; i < n; ++i) {
        if (param == 1.0) {
          for (int j = 0; j < p_dim; ++j) out(i, j) = rng.uniform();
          continue;
        }
        const double alpha = 1.0 / param;
        const double frailty = positive_stable(alpha, rng);
        for (int j = 0; j < p_dim; ++j)
          out(i, j) = std::exp(-std::pow(rng.exponential() / frailty, alpha));
      }
      break;
    }
    case CopulaKind::bp: {
      if (p_dim < 3) throw std::invalid_argument("BP copula needs p >= 3");
      for (int i = 0; i < n; ++i) {
        for (int j = 1; j < p_dim; ++j) out(i, j) = rng.uniform();
        out(i, 0) = std::fmod(out(i, 1) + out(i, 2), 1.0);
      }
      break;
    }
  }
  return out;
}

Eigen::MatrixXd pullback_to_sphere(const Eigen::MatrixXd& cube_sample) {
  const auto n = cube_sample.rows();
  const auto p = cube_sample.cols();
  Eigen::MatrixXd out(n, p + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j)
      if (!(cube_sample(i, j) >= 0.0 && cube_sample(i, j) < 1.0))
        throw std::invalid_argument("pullback_to_sphere: entries must lie in [0,1)");
    out.row(i) = cube_to_sphere_point(cube_sample.row(i).transpose()).transpose();
  }
  return out;
}

Eigen::MatrixXd pullback_to_euclidean(const Eigen::MatrixXd& cube_sample) {
  Eigen::MatrixXd out(cube_sample.rows(), cube_sample.cols());
  for (Eigen::Index i = 0; i < cube_sample.rows(); ++i)
    for (Eigen::Index j = 0; j < cube_sample.cols(); ++j) {
      const double u = cube_sample(i, j);
      if (!(u > 0.0 && u < 1.0))
        throw std::invalid_argument("pullback_to_euclidean: entries must lie in (0,1)");
      out(i, j) = normal_quantile(u);
    }
  return out;
}

Eigen::MatrixXd sample_euclidean_alternative(const AlternativeSpec& spec, int p_dim, int n,
                                             Rng& rng) {
  using Family = AlternativeSpec::Family;
  spec.validate();
  Eigen::MatrixXd out(n, p_dim);
  switch (spec.family) {
    case Family::mixture_shift: {
      const double P = spec.param("P");
      const double mu = spec.param("mu");
      // shift direction (1,...,1)/sqrt(p), so mu is the shift magnitude
      const Eigen::VectorXd shift =
          (mu / std::sqrt(static_cast<double>(p_dim))) * Eigen::VectorXd::Ones(p_dim);
      for (int i = 0; i < n; ++i) {
        const bool contaminated = rng.uniform() < P;
        for (int j = 0; j < p_dim; ++j) out(i, j) = rng.normal();
        if (contaminated) out.row(i) += shift.transpose();
      }
      break;
    }
    case Family::mixture_B: {
      // Mix(P, 0, B) with B = 0.9 * 11^T + 0.1 * I
      const double P = spec.param("P");
      for (int i = 0; i < n; ++i) {
        const bool contaminated = rng.uniform() < P;
        if (contaminated) {
          const double w = rng.normal();
          for (int j = 0; j < p_dim; ++j)
            out(i, j) = std::sqrt(0.9) * w + std::sqrt(0.1) * rng.normal();
        } else {
          for (int j = 0; j < p_dim; ++j) out(i, j) = rng.normal();
        }
      }
      break;
    }
    case Family::multivariate_t: {
      const double df = spec.param("df");
      for (int i = 0; i < n; ++i) {
        const double chi2 = 2.0 * rng.gamma(0.5 * df);
        const double scale = std::sqrt(df / chi2);
        for (int j = 0; j < p_dim; ++j) out(i, j) = scale * rng.normal();
      }
      break;
    }
    case Family::radial_power: {
      const double theta = spec.param("theta");
      const Eigen::MatrixXd dirs = uniform_sphere_sample(n, p_dim, rng);
      for (int i = 0; i < n; ++i) {
        const double radius2 = 2.0 * rng.gamma(0.5 * p_dim);  // chi2_p
        out.row(i) = std::pow(radius2, theta) * dirs.row(i);
      }
      break;
    }
    case Family::ma_product: {
      // X = Z M(a): X_1 = Z_1, X_j = a Z_{j-1} + Z_j
      const double a = spec.param("a");
      for (int i = 0; i < n; ++i) {
        double prev = 0.0;
        for (int j = 0; j < p_dim; ++j) {
          const double z = rng.normal();
          out(i, j) = z + a * prev;
          prev = z;
        }
      }
      break;
    }
    case Family::equicorr_normal: {
      // rho J + (1-rho) I when PSD; rho J + I for rho >= 1
      const double rho = spec.param("rho");
      for (int i = 0; i < n; ++i) {
        if (rho < 1.0) {
          if (rho <= -1.0 / static_cast<double>(p_dim - 1))
            throw std::invalid_argument("equicorr_normal: covariance is not PSD");
          out.row(i) = equicorr_normal_row(p_dim, rho, rng).transpose();
        } else {
          const double w = rng.normal();
          for (int j = 0; j < p_dim; ++j) out(i, j) = std::sqrt(rho) * w + rng.normal();
        }
      }
      break;
    }
    case Family::shifted_bernoulli: {
      const double P = spec.param("P");
      for (int i = 0; i < n; ++i) {
        const bool shifted = rng.uniform() < P;
        for (int j = 0; j < p_dim; ++j) out(i, j) = rng.normal() + (shifted ? 3.0 : 0.0);
      }
      break;
    }
    case Family::equicorr_mixture: {
      // B_P Z_0 + (1 - B_P) Z_rho
      const double P = spec.param("P");
      const double rho = spec.param("rho");
      if (rho <= -1.0 / static_cast<double>(p_dim - 1) || rho >= 1.0)
        throw std::invalid_argument("equicorr_mixture: rho outside the PSD range");
      for (int i = 0; i < n; ++i) {
        const bool standard = rng.uniform() < P;
        if (standard) {
          for (int j = 0; j < p_dim; ++j) out(i, j) = rng.normal();
        } else {
          out.row(i) = equicorr_normal_row(p_dim, rho, rng).transpose();
        }
      }
      break;
    }
    case Family::skew_normal: {
      // shape vector alpha * (1,...,1)/sqrt(p), conditioning representation
      const double alpha = spec.param("alpha_shape");
      const Eigen::VectorXd a =
          (alpha / std::sqrt(static_cast<double>(p_dim))) * Eigen::VectorXd::Ones(p_dim);
      const Eigen::VectorXd delta = a / std::sqrt(1.0 + a.squaredNorm());
      const double d2 = delta.squaredNorm();
      const double shrink = (d2 > 0.0) ? (1.0 - std::sqrt(1.0 - d2)) / d2 : 0.0;
      for (int i = 0; i < n; ++i) {
        const double w = rng.normal();
        Eigen::VectorXd g(p_dim);
        for (int j = 0; j < p_dim; ++j) g[j] = rng.normal();
        Eigen::VectorXd u = delta * w + g - shrink * delta.dot(g) * delta;
        if (w < 0.0) u = -u;
        out.row(i) = u.transpose();
      }
      break;
    }
    default:
      throw std::invalid_argument("sample_euclidean_alternative: family '" +
                                  AlternativeSpec::family_to_string(spec.family) +
                                  "' is not a Euclidean alternative");
  }
  return out;
}

Eigen::MatrixXd sample_alternative(const AlternativeSpec& spec, int p_dim, int n, Rng& rng) {
  using Family = AlternativeSpec::Family;
  spec.validate();
  switch (spec.family) {
    case Family::vmf:
      return sample_vmf(p_dim, Eigen::VectorXd::Unit(p_dim + 1, 0), spec.param("kappa"), n, rng);
    case Family::vmf_mixture:
      return sample_vmf_mixture(p_dim, spec.param("kappa"), n, rng);
    case Family::projected_normal_diag:
      return sample_projected(p_dim, ProjectedCov::diag_kappa, spec.param("kappa"), n, rng);
    case Family::projected_ma:
      return sample_projected(p_dim, ProjectedCov::shift_cyclic, spec.param("kappa"), n, rng);
    case Family::projected_equicorr:
      return sample_projected(p_dim, ProjectedCov::equicorr, spec.param("rho"), n, rng);
    case Family::copula_normal:
      return sample_copula(CopulaKind::normal, spec.param("rho"), p_dim, n, rng);
    case Family::copula_clayton:
      return sample_copula(CopulaKind::clayton, spec.param("theta"), p_dim, n, rng);
    case Family::copula_gumbel:
      return sample_copula(CopulaKind::gumbel, spec.param("theta"), p_dim, n, rng);
    case Family::copula_bp_mixture: {
      const double P = spec.param("P");
      Eigen::MatrixXd out(n, p_dim);
      for (int i = 0; i < n; ++i) {
        const bool bp = rng.uniform() < P;
        if (bp) {
          out.row(i) = sample_copula(CopulaKind::bp, 0.0, p_dim, 1, rng).row(0);
        } else {
          for (int j = 0; j < p_dim; ++j) out(i, j) = rng.uniform();
        }
      }
      return out;
    }
    default:
      return sample_euclidean_alternative(spec, p_dim, n, rng);
  }
}

}  // namespace munic
