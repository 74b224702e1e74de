#include "munic/measure.hpp"

#include <cmath>
#include <stdexcept>

namespace munic {

namespace {

constexpr double kCheckTol = 1e-10;

std::vector<std::size_t> strides_of(const DiscreteProductSpace& space) {
  const int p = space.dims();
  std::vector<std::size_t> strides(p, 1);
  for (int j = p - 2; j >= 0; --j)
    strides[j] = strides[j + 1] * static_cast<std::size_t>(space.axis_sizes[j + 1]);
  return strides;
}

// Visit every cell in row-major order; idx is reused across calls.
template <typename F>
void for_each_cell(const DiscreteProductSpace& space, F&& fn) {
  const int p = space.dims();
  std::vector<int> idx(p, 0);
  const std::size_t total = space.cell_count();
  for (std::size_t flat = 0; flat < total; ++flat) {
    fn(idx, flat);
    for (int j = p - 1; j >= 0; --j) {
      if (++idx[j] < space.axis_sizes[j]) break;
      idx[j] = 0;
    }
  }
}

}  // namespace

std::size_t DiscreteProductSpace::cell_count() const {
  std::size_t n = 1;
  for (int k : axis_sizes) n *= static_cast<std::size_t>(k);
  return n;
}

void DiscreteProductSpace::validate() const {
  if (axis_sizes.empty() && axis_probs.empty()) return;  // scalar space (H = {})
  if (axis_sizes.size() != axis_probs.size())
    throw std::invalid_argument("DiscreteProductSpace: sizes/probs length mismatch");
  for (std::size_t j = 0; j < axis_sizes.size(); ++j) {
    if (axis_sizes[j] < 1) throw std::invalid_argument("DiscreteProductSpace: axis size < 1");
    if (axis_probs[j].size() != static_cast<std::size_t>(axis_sizes[j]))
      throw std::invalid_argument("DiscreteProductSpace: prob vector length mismatch");
    double sum = 0.0;
    for (double q : axis_probs[j]) {
      if (q < 0.0) throw std::invalid_argument("DiscreteProductSpace: negative probability");
      sum += q;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("DiscreteProductSpace: axis probabilities must sum to 1");
  }
}

DiscreteProductSpace DiscreteProductSpace::restrict_to(CoordSubset mask) const {
  DiscreteProductSpace out;
  for (int j = 0; j < dims(); ++j) {
    if (mask & (1u << j)) {
      out.axis_sizes.push_back(axis_sizes[j]);
      out.axis_probs.push_back(axis_probs[j]);
    }
  }
  return out;
}

bool DiscreteProductSpace::same_shape(const DiscreteProductSpace& other) const {
  return axis_sizes == other.axis_sizes;
}

double DiscreteSignedMeasure::total_mass() const {
  double s = 0.0;
  for (double v : cell_mass) s += v;
  return s;
}

double DiscreteSignedMeasure::total_abs_mass() const {
  double s = 0.0;
  for (double v : cell_mass) s += std::fabs(v);
  return s;
}

double& DiscreteSignedMeasure::at(const std::vector<int>& idx) {
  const auto strides = strides_of(space);
  std::size_t flat = 0;
  for (std::size_t j = 0; j < idx.size(); ++j) flat += strides[j] * static_cast<std::size_t>(idx[j]);
  return cell_mass[flat];
}

double DiscreteSignedMeasure::at(const std::vector<int>& idx) const {
  return const_cast<DiscreteSignedMeasure*>(this)->at(idx);
}

DiscreteSignedMeasure DiscreteSignedMeasure::marginal_onto(CoordSubset mask) const {
  DiscreteSignedMeasure out;
  out.space = space.restrict_to(mask);
  out.cell_mass.assign(out.space.cell_count(), 0.0);
  const auto out_strides = strides_of(out.space);
  for_each_cell(space, [&](const std::vector<int>& idx, std::size_t flat) {
    std::size_t rflat = 0;
    std::size_t rj = 0;
    for (int j = 0; j < space.dims(); ++j) {
      if (mask & (1u << j)) rflat += out_strides[rj++] * static_cast<std::size_t>(idx[j]);
    }
    out.cell_mass[rflat] += cell_mass[flat];
  });
  return out;
}

DiscreteSignedMeasure DiscreteSignedMeasure::zero(const DiscreteProductSpace& space) {
  DiscreteSignedMeasure m;
  m.space = space;
  m.cell_mass.assign(space.cell_count(), 0.0);
  return m;
}

DiscreteSignedMeasure DiscreteSignedMeasure::product(const DiscreteProductSpace& space, double c) {
  DiscreteSignedMeasure m = zero(space);
  for_each_cell(space, [&](const std::vector<int>& idx, std::size_t flat) {
    double v = c;
    for (int j = 0; j < space.dims(); ++j) v *= space.axis_probs[j][idx[j]];
    m.cell_mass[flat] = v;
  });
  return m;
}

namespace {

// Add P_{J \ H} x component to acc with weight `sign`, on the full space.
void accumulate_expansion(DiscreteSignedMeasure& acc, const ZmComponent& comp, double sign) {
  const DiscreteProductSpace& space = acc.space;
  const auto comp_strides = strides_of(comp.measure.space);
  for_each_cell(space, [&](const std::vector<int>& idx, std::size_t flat) {
    double w = 1.0;
    std::size_t rflat = 0;
    std::size_t rj = 0;
    for (int j = 0; j < space.dims(); ++j) {
      if (comp.subset & (1u << j)) {
        rflat += comp_strides[rj++] * static_cast<std::size_t>(idx[j]);
      } else {
        w *= space.axis_probs[j][idx[j]];
      }
    }
    acc.cell_mass[flat] += sign * w * comp.measure.cell_mass[rflat];
  });
}

}  // namespace

Decomposition decompose(const DiscreteSignedMeasure& mu) {
  mu.space.validate();
  const int p = mu.space.dims();
  if (p < 1 || p > 6)
    throw std::invalid_argument("decompose: oracle supports 1 <= p <= 6 axes");
  for (const auto& probs : mu.space.axis_probs)
    for (double q : probs)
      if (q == 0.0)
        throw std::invalid_argument("decompose: zero axis probability not supported");
  if (mu.cell_mass.size() != mu.space.cell_count())
    throw std::invalid_argument("decompose: cell_mass size mismatch");
  for (double v : mu.cell_mass)
    if (!std::isfinite(v)) throw std::invalid_argument("decompose: non-finite cell mass");

  Decomposition out;

  const double total = mu.total_mass();
  ZmComponent empty;
  empty.subset = 0;
  empty.measure.space = DiscreteProductSpace{};
  empty.measure.cell_mass = {total};
  out.emplace(0u, std::move(empty));

  // mu_0 = mu - mu(Omega) * P, then peel one cardinality at a time:
  // mu_H = marginal of mu_{k-1} onto H for #H = k, and
  // mu_k = mu_{k-1} - sum_{#H=k} P_{J\H} x mu_H.
  DiscreteSignedMeasure residual = mu;
  {
    const DiscreteSignedMeasure base = DiscreteSignedMeasure::product(mu.space, total);
    for (std::size_t i = 0; i < residual.cell_mass.size(); ++i)
      residual.cell_mass[i] -= base.cell_mass[i];
  }

  const CoordSubset all = (1u << p) - 1u;
  for (int k = 1; k <= p; ++k) {
    std::vector<ZmComponent> level;
    for (CoordSubset m = 1; m <= all; ++m) {
      if (subset_cardinality(m) != k) continue;
      ZmComponent comp;
      comp.subset = m;
      comp.measure = residual.marginal_onto(m);
      level.push_back(std::move(comp));
    }
    for (const auto& comp : level) accumulate_expansion(residual, comp, -1.0);
    for (auto& comp : level) out.emplace(comp.subset, std::move(comp));
  }
  return out;
}

DiscreteSignedMeasure reconstruct(const Decomposition& components,
                                  const DiscreteProductSpace& space) {
  space.validate();
  const int p = space.dims();
  const CoordSubset all = (1u << p) - 1u;
  for (CoordSubset m = 0; m <= all; ++m)
    if (!components.count(m))
      throw std::invalid_argument("reconstruct: missing component for a subset");

  DiscreteSignedMeasure out = DiscreteSignedMeasure::zero(space);
  for (const auto& [mask, comp] : components) {
    if (mask > all) throw std::invalid_argument("reconstruct: component outside space");
    if (mask == 0) {
      if (comp.measure.cell_mass.size() != 1)
        throw std::invalid_argument("reconstruct: empty-subset component must be scalar");
      const DiscreteSignedMeasure base =
          DiscreteSignedMeasure::product(space, comp.measure.cell_mass[0]);
      for (std::size_t i = 0; i < out.cell_mass.size(); ++i)
        out.cell_mass[i] += base.cell_mass[i];
      continue;
    }
    if (!comp.measure.space.same_shape(space.restrict_to(mask)))
      throw std::invalid_argument("reconstruct: component space mismatch");
    accumulate_expansion(out, comp, 1.0);
  }
  return out;
}

bool is_k_null(const DiscreteSignedMeasure& mu, int k) {
  const int p = mu.space.dims();
  if (k < 0 || k > p) throw std::invalid_argument("is_k_null: k outside [0, p]");
  const double tol = kCheckTol * (1.0 + mu.total_abs_mass());
  if (std::fabs(mu.total_mass()) > tol) return false;  // the K = {} set is Omega
  const CoordSubset all = (p == 0) ? 0u : ((1u << p) - 1u);
  for (CoordSubset m = 1; m <= all && all; ++m) {
    if (subset_cardinality(m) > k) continue;
    const DiscreteSignedMeasure marg = mu.marginal_onto(m);
    for (double v : marg.cell_mass)
      if (std::fabs(v) > tol) return false;
  }
  return true;
}

}  // namespace munic
