#include "munic/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "munic/special.hpp"

namespace munic {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 6.28318530717958647692528676656;
constexpr double kPoleTol = 1e-12;
constexpr double kEigenFloor = 1e-10;

// ranks 1..n, ties broken by ascending row index
std::vector<double> ranks_of(const Eigen::VectorXd& values, bool* had_ties) {
  const auto n = static_cast<std::size_t>(values.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[static_cast<Eigen::Index>(a)] < values[static_cast<Eigen::Index>(b)]; });
  std::vector<double> ranks(n);
  for (std::size_t k = 0; k < n; ++k) {
    ranks[order[k]] = static_cast<double>(k + 1);
    if (had_ties && k > 0 &&
        values[static_cast<Eigen::Index>(order[k])] == values[static_cast<Eigen::Index>(order[k - 1])])
      *had_ties = true;
  }
  return ranks;
}

}  // namespace

Eigen::VectorXd polar_forward(const Eigen::VectorXd& angles) {
  const auto p = angles.size();
  if (p < 1) throw std::invalid_argument("polar_forward: needs at least one angle");
  Eigen::VectorXd z(p + 1);
  double sin_prod = 1.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    z[j] = std::cos(angles[j]) * sin_prod;
    sin_prod *= std::sin(angles[j]);
  }
  z[p] = sin_prod;  // phi_{p+1} = 0
  return z;
}

Eigen::VectorXd polar_inverse(const Eigen::VectorXd& z) {
  const auto d = z.size();
  if (d < 2) throw std::invalid_argument("polar_inverse: ambient dimension must be >= 2");
  if (std::fabs(z.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("polar_inverse: input must have unit norm");
  const auto p = d - 1;
  Eigen::VectorXd angles = Eigen::VectorXd::Zero(p);
  // tail[j] = |(z_j, ..., z_{d-1})|
  Eigen::VectorXd tail(d);
  double acc = 0.0;
  for (Eigen::Index j = d - 1; j >= 0; --j) {
    acc += z[j] * z[j];
    tail[j] = std::sqrt(acc);
  }
  // Below the pole tolerance the current angle collapses to 0 or pi and
  // all deeper angles (azimuth included) are fixed to 0.
  for (Eigen::Index j = 0; j < p - 1; ++j) {
    if (tail[j + 1] < kPoleTol) {
      if (z[j] < 0.0) angles[j] = kPi;
      return angles;
    }
    angles[j] = std::atan2(tail[j + 1], z[j]);  // in [0, pi]
  }
  if (tail[p - 1] >= kPoleTol) {
    double az = std::atan2(z[p], z[p - 1]);
    if (az < 0.0) az += kTwoPi;
    if (az >= kTwoPi) az = 0.0;
    angles[p - 1] = az;
  }
  return angles;
}

namespace {

// int_0^phi sin^k(t) dt by the antiderivative recurrence.
double sin_power_integral(int k, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  double even = phi;      // J_0
  double odd = 1.0 - c;   // J_1
  if (k == 0) return even;
  if (k == 1) return odd;
  double value = (k % 2 == 0) ? even : odd;
  for (int m = (k % 2 == 0) ? 2 : 3; m <= k; m += 2) {
    value = (-c * std::pow(s, m - 1)) / m + (static_cast<double>(m - 1) / m) * value;
  }
  return value;
}

double sin_power_total(int k) {
  double value = (k % 2 == 0) ? kPi : 2.0;
  for (int m = (k % 2 == 0) ? 2 : 3; m <= k; m += 2)
    value *= static_cast<double>(m - 1) / m;
  return value;
}

}  // namespace

double sin_power_cdf(int k, double phi) {
  if (k < 0) throw std::invalid_argument("sin_power_cdf: exponent must be >= 0");
  if (phi < 0.0 || phi > kPi) throw std::invalid_argument("sin_power_cdf: phi outside [0,pi]");
  if (phi == 0.0) return 0.0;
  if (phi == kPi) return 1.0;
  double u = sin_power_integral(k, phi) / sin_power_total(k);
  if (u < 0.0) u = 0.0;
  if (u > 1.0) u = 1.0;
  return u;
}

double sin_power_quantile(int k, double u) {
  if (k < 0) throw std::invalid_argument("sin_power_quantile: exponent must be >= 0");
  if (u < 0.0 || u > 1.0) throw std::invalid_argument("sin_power_quantile: u outside [0,1]");
  if (u == 0.0) return 0.0;
  if (u == 1.0) return kPi;
  const double total = sin_power_total(k);
  double lo = 0.0, hi = kPi;
  double phi = kPi * u;
  for (int it = 0; it < 200; ++it) {
    const double f = sin_power_integral(k, phi) / total - u;
    if (f > 0.0) hi = phi; else lo = phi;
    const double pdf = std::pow(std::sin(phi), k) / total;
    double next = (pdf > 1e-300) ? phi - f / pdf : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - phi) < 1e-13) { phi = next; break; }
    phi = next;
  }
  return phi;
}

Eigen::VectorXd sphere_to_cube_point(const Eigen::VectorXd& z) {
  const auto p = z.size() - 1;
  if (p < 1) throw std::invalid_argument("sphere_to_cube_point: ambient dimension must be >= 2");
  const Eigen::VectorXd angles = polar_inverse(z);
  Eigen::VectorXd u(p);
  for (Eigen::Index j = 0; j < p - 1; ++j)
    u[j] = sin_power_cdf(static_cast<int>(p - 1 - j), angles[j]);
  u[p - 1] = angles[p - 1] / kTwoPi;
  return u;
}

Eigen::VectorXd cube_to_sphere_point(const Eigen::VectorXd& u) {
  const auto p = u.size();
  if (p < 1) throw std::invalid_argument("cube_to_sphere_point: needs dimension >= 1");
  Eigen::VectorXd angles(p);
  for (Eigen::Index j = 0; j < p - 1; ++j)
    angles[j] = sin_power_quantile(static_cast<int>(p - 1 - j), u[j]);
  angles[p - 1] = kTwoPi * u[p - 1];
  return polar_forward(angles);
}

CubeSample sphere_to_cube(const Eigen::MatrixXd& sphere_sample) {
  const auto n = sphere_sample.rows();
  const auto d = sphere_sample.cols();
  if (n < 1 || d < 2) throw std::invalid_argument("sphere_to_cube: needs n >= 1 rows in R^(p+1), p >= 1");
  CubeSample out(n, d - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd z = sphere_sample.row(i).transpose();
    const double norm = z.norm();
    if (std::fabs(norm - 1.0) > 1e-6)
      throw std::invalid_argument("sphere_to_cube: row " + std::to_string(i) +
                                  " is not unit-norm (|z| = " + std::to_string(norm) + ")");
    z /= norm;
    out.row(i) = sphere_to_cube_point(z).transpose();
  }
  return out;
}

CubeSample uniform_cube_sample(int n, int p, Rng& rng) {
  CubeSample out(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) out(i, j) = rng.uniform();
  return out;
}

Eigen::MatrixXd uniform_sphere_sample(int n, int ambient_dim, Rng& rng) {
  Eigen::MatrixXd out(n, ambient_dim);
  for (int i = 0; i < n; ++i) {
    double norm2;
    do {
      for (int j = 0; j < ambient_dim; ++j) out(i, j) = rng.normal();
      norm2 = out.row(i).squaredNorm();
    } while (norm2 < 1e-24);
    out.row(i) /= std::sqrt(norm2);
  }
  return out;
}

NormalityContext fit_normality_context(const Eigen::MatrixXd& sample) {
  const auto n = sample.rows();
  const auto p = sample.cols();
  if (n <= p) throw std::invalid_argument("normality: needs n > p");
  NormalityContext ctx;
  ctx.mean = sample.colwise().mean().transpose();
  const Eigen::MatrixXd centered = sample.rowwise() - ctx.mean.transpose();
  ctx.covariance = (centered.transpose() * centered) / static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ctx.covariance);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double lambda_max = ev.maxCoeff();
  const double lambda_min = ev.minCoeff();
  if (!(lambda_min > kEigenFloor * lambda_max))
    throw std::invalid_argument("normality: covariance is singular (smallest eigenvalue " +
                                std::to_string(lambda_min) + ")");
  const Eigen::VectorXd inv_sqrt = ev.array().rsqrt();
  const Eigen::VectorXd sqrt_ev = ev.array().sqrt();
  ctx.whitener = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
  ctx.sqrt_covariance = es.eigenvectors() * sqrt_ev.asDiagonal() * es.eigenvectors().transpose();
  return ctx;
}

std::pair<CubeSample, NormalityContext> normality_transform(const Eigen::MatrixXd& sample) {
  NormalityContext ctx = fit_normality_context(sample);
  const Eigen::MatrixXd standardized =
      (sample.rowwise() - ctx.mean.transpose()) * ctx.whitener;
  CubeSample cube(sample.rows(), sample.cols());
  for (Eigen::Index i = 0; i < sample.rows(); ++i)
    for (Eigen::Index j = 0; j < sample.cols(); ++j)
      cube(i, j) = normal_cdf(standardized(i, j));
  return {std::move(cube), std::move(ctx)};
}

CubeSample normality_null_sample(const NormalityContext& ctx, int n, Rng& rng) {
  const auto p = ctx.mean.size();
  Eigen::MatrixXd gauss(n, p);
  for (int i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) gauss(i, j) = rng.normal();
  Eigen::MatrixXd draw = gauss * ctx.sqrt_covariance;
  draw.rowwise() += ctx.mean.transpose();
  return normality_transform(draw).first;
}

CubeSample isotropy_transform(const Eigen::MatrixXd& sample, Centering centering,
                              std::vector<std::string>* warnings) {
  const auto n = sample.rows();
  const auto p = sample.cols();
  if (p < 2) throw std::invalid_argument("isotropy: needs p >= 2");
  Eigen::MatrixXd data = sample;
  if (centering == Centering::estimated)
    data.rowwise() -= sample.colwise().mean();

  Eigen::VectorXd norms(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    norms[i] = data.row(i).norm();
    if (norms[i] == 0.0)
      throw std::invalid_argument("isotropy: zero-norm row " + std::to_string(i));
  }
  bool tied = false;
  const std::vector<double> ranks = ranks_of(norms, &tied);
  if (tied && warnings)
    warnings->push_back("tied radial norms broken by row order");

  CubeSample out(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd direction = data.row(i).transpose() / norms[i];
    out.row(i).head(p - 1) = sphere_to_cube_point(direction).transpose();
    out(i, p - 1) = ranks[static_cast<std::size_t>(i)] / static_cast<double>(n + 1);
  }
  return out;
}

CubeSample isotropy_null_sample(int n, int p, Rng& rng) {
  CubeSample out = uniform_cube_sample(n, p, rng);
  const Eigen::VectorXd last = out.col(p - 1);
  const std::vector<double> ranks = ranks_of(last, nullptr);
  for (int i = 0; i < n; ++i)
    out(i, p - 1) = ranks[static_cast<std::size_t>(i)] / static_cast<double>(n + 1);
  return out;
}

CubeSample ellipticity_transform(const Eigen::MatrixXd& sample, Centering centering,
                                 std::vector<std::string>* warnings) {
  const auto n = sample.rows();
  const auto p = sample.cols();
  if (p < 2) throw std::invalid_argument("ellipticity: needs p >= 2");
  if (n <= p) throw std::invalid_argument("ellipticity: needs n > p");
  Eigen::MatrixXd data = sample;
  if (centering == Centering::estimated)
    data.rowwise() -= sample.colwise().mean();
  const Eigen::MatrixXd scatter = (data.transpose() * data) / static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scatter);
  const Eigen::VectorXd& ev = es.eigenvalues();
  if (!(ev.minCoeff() > kEigenFloor * ev.maxCoeff()))
    throw std::invalid_argument("ellipticity: scatter matrix is singular (smallest eigenvalue " +
                                std::to_string(ev.minCoeff()) + ")");
  const Eigen::VectorXd inv_sqrt = ev.array().rsqrt();
  const Eigen::MatrixXd whitener =
      es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
  return isotropy_transform(data * whitener, Centering::known_zero, warnings);
}

CubeSample independence_transform(const Eigen::MatrixXd& sample,
                                  std::vector<std::string>* warnings) {
  const auto n = sample.rows();
  const auto p = sample.cols();
  CubeSample out(n, p);
  bool tied = false;
  for (Eigen::Index j = 0; j < p; ++j) {
    const std::vector<double> ranks = ranks_of(sample.col(j), &tied);
    for (Eigen::Index i = 0; i < n; ++i)
      out(i, j) = ranks[static_cast<std::size_t>(i)] / static_cast<double>(n + 1);
  }
  if (tied && warnings)
    warnings->push_back("tied column values broken by row order");
  return out;
}

CubeSample independence_null_sample(int n, int p, Rng& rng) {
  CubeSample out(n, p);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int j = 0; j < p; ++j) {
    std::iota(perm.begin(), perm.end(), 1);
    for (int i = n - 1; i > 0; --i) {
      const int k = static_cast<int>(rng.uniform() * (i + 1));
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(k)]);
    }
    for (int i = 0; i < n; ++i)
      out(i, j) = static_cast<double>(perm[static_cast<std::size_t>(i)]) / static_cast<double>(n + 1);
  }
  return out;
}

}  // namespace munic
