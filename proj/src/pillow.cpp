#include "munic/pillow.hpp"

#include <cmath>
#include <stdexcept>

namespace munic {

void validate_cube_sample(const CubeSample& sample) {
  const auto n = sample.rows();
  const auto p = sample.cols();
  if (n < 1) throw std::invalid_argument("CubeSample: needs at least one row");
  if (p < 1 || p > kMaxDimension)
    throw std::invalid_argument("CubeSample: dimension out of range [1,20]");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) {
      const double v = sample(i, j);
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("CubeSample: entry outside [0,1]");
    }
}

namespace {

// Product over the bits of `mask`, lowest bit first. sq_norm and
// sq_norms_all go through the same fold so their results are bitwise
// identical.
inline double masked_product(const std::vector<Eigen::MatrixXd>& kernels, CoordSubset mask,
                             Eigen::Index a, Eigen::Index b) {
  double acc = 1.0;
  CoordSubset m = mask;
  while (m) {
    const int j = std::countr_zero(m);
    acc = kernels[static_cast<std::size_t>(j)](a, b) * acc;
    m &= m - 1;
  }
  return acc;
}

std::vector<Eigen::MatrixXd> coordinate_kernels(const CubeSample& sample, CoordSubset needed) {
  const Eigen::Index n = sample.rows();
  const Eigen::Index p = sample.cols();
  std::vector<Eigen::MatrixXd> kernels(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!(needed & (1u << j))) continue;
    Eigen::MatrixXd& K = kernels[static_cast<std::size_t>(j)];
    K.resize(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b <= a; ++b) {
        const double v = bridge_kernel(sample(a, j), sample(b, j));
        K(a, b) = v;
        K(b, a) = v;
      }
  }
  return kernels;
}

double sq_norm_shared(const std::vector<Eigen::MatrixXd>& kernels, CoordSubset mask,
                      Eigen::Index n) {
  // sum over unordered pairs twice plus the diagonal
  double off = 0.0;
  for (Eigen::Index a = 1; a < n; ++a)
    for (Eigen::Index b = 0; b < a; ++b) off += masked_product(kernels, mask, a, b);
  double diag = 0.0;
  for (Eigen::Index a = 0; a < n; ++a) diag += masked_product(kernels, mask, a, a);
  double value = (2.0 * off + diag) / static_cast<double>(n);
  if (value < 0.0) {
    if (value < -1e-12) throw std::logic_error("sq_norm: negative beyond tolerance");
    value = 0.0;  // it is a squared norm
  }
  return value;
}

}  // namespace

double sq_norm(const CubeSample& sample, CoordSubset mask) {
  if (mask == 0) throw std::invalid_argument("sq_norm: empty coordinate subset");
  const Eigen::Index p = sample.cols();
  if (mask >= (1u << p)) throw std::invalid_argument("sq_norm: subset outside dimension");
  const auto kernels = coordinate_kernels(sample, mask);
  return sq_norm_shared(kernels, mask, sample.rows());
}

SqNormVector sq_norms_all(const CubeSample& sample, const SubsetFamily& family) {
  if (family.masks.empty()) throw std::invalid_argument("sq_norms_all: empty family");
  CoordSubset needed = 0;
  for (CoordSubset m : family.masks) needed |= m;
  const Eigen::Index p = sample.cols();
  if (needed >= (1u << p)) throw std::invalid_argument("sq_norms_all: subset outside dimension");
  const auto kernels = coordinate_kernels(sample, needed);
  SqNormVector out(family.masks.size());
  for (std::size_t i = 0; i < family.masks.size(); ++i)
    out[i] = sq_norm_shared(kernels, family.masks[i], sample.rows());
  return out;
}

std::pair<double, double> pillow_moments(int h) {
  if (h < 1) throw std::invalid_argument("pillow_moments: cardinality must be >= 1");
  return {std::pow(6.0, -h), 2.0 * std::pow(90.0, -h)};
}

double kl_sample(int h, int n_max, Rng& rng) {
  if (h < 1) throw std::invalid_argument("kl_sample: cardinality must be >= 1");
  if (n_max < 1) throw std::invalid_argument("kl_sample: truncation must be >= 1");
  constexpr double kPiSq = 9.869604401089358618834490999876;

  // lambda_nu = 1/(nu pi)^2 per axis; multi-index weight is the product.
  std::vector<double> lambda(static_cast<std::size_t>(n_max));
  double lambda_sum = 0.0;
  for (int nu = 1; nu <= n_max; ++nu) {
    lambda[static_cast<std::size_t>(nu - 1)] = 1.0 / (kPiSq * nu * nu);
    lambda_sum += lambda[static_cast<std::size_t>(nu - 1)];
  }
  const double truncated_mean = std::pow(lambda_sum, h);
  const double tail_correction = std::pow(6.0, -h) - truncated_mean;

  double sum = 0.0;
  if (h == 1) {
    for (int nu = 1; nu <= n_max; ++nu) {
      const double z = rng.normal();
      sum += z * z * lambda[static_cast<std::size_t>(nu - 1)];
    }
  } else {
    // odometer over nu in {1..n_max}^h
    std::vector<int> idx(static_cast<std::size_t>(h), 0);
    for (;;) {
      double w = 1.0;
      for (int j = 0; j < h; ++j) w *= lambda[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
      const double z = rng.normal();
      sum += z * z * w;
      int j = h - 1;
      for (; j >= 0; --j) {
        if (++idx[static_cast<std::size_t>(j)] < n_max) break;
        idx[static_cast<std::size_t>(j)] = 0;
      }
      if (j < 0) break;
    }
  }
  double value = sum + tail_correction;
  return value < 0.0 ? 0.0 : value;
}

}  // namespace munic
