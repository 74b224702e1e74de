#pragma once

// Exact zero-marginal decomposition of finite signed measures on small
// discrete product spaces. This is the correctness oracle for the rest of
// the library, not a production path: dense arrays, p <= 6, <= 16 levels
// per axis.

#include <cstdint>
#include <map>
#include <vector>

#include "munic/subset.hpp"

namespace munic {

struct DiscreteProductSpace {
  std::vector<int> axis_sizes;                 // k_1..k_p
  std::vector<std::vector<double>> axis_probs; // P_j, each summing to 1

  int dims() const { return static_cast<int>(axis_sizes.size()); }
  std::size_t cell_count() const;
  void validate() const;  // throws on malformed sizes/probs

  // Restriction to the axes in `mask`, in increasing axis order.
  DiscreteProductSpace restrict_to(CoordSubset mask) const;

  bool same_shape(const DiscreteProductSpace& other) const;
};

struct DiscreteSignedMeasure {
  DiscreteProductSpace space;
  std::vector<double> cell_mass;  // row-major, last axis fastest

  double total_mass() const;
  double total_abs_mass() const;

  double& at(const std::vector<int>& idx);
  double at(const std::vector<int>& idx) const;

  // Sum cell masses over the axes *not* in `mask` (evaluate on
  // A_j = Omega_j off the mask), yielding a measure on the restricted space.
  DiscreteSignedMeasure marginal_onto(CoordSubset mask) const;

  static DiscreteSignedMeasure zero(const DiscreteProductSpace& space);
  // c * P_1 x ... x P_p
  static DiscreteSignedMeasure product(const DiscreteProductSpace& space, double c);
};

struct ZmComponent {
  CoordSubset subset = 0;          // 0 encodes the empty subset
  DiscreteSignedMeasure measure;   // on the restricted space; scalar for H = {}
};

using Decomposition = std::map<CoordSubset, ZmComponent>;

// All 2^p zero-marginal components of mu. Rejects spaces with a zero
// axis probability.
Decomposition decompose(const DiscreteSignedMeasure& mu);

// Assemble a measure on `space` from one component per subset.
DiscreteSignedMeasure reconstruct(const Decomposition& components,
                                  const DiscreteProductSpace& space);

// True iff mu vanishes on every K-set with #K <= k (tolerance scaled by
// total absolute mass).
bool is_k_null(const DiscreteSignedMeasure& mu, int k);

}  // namespace munic
