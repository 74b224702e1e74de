#pragma once

// Monte Carlo null reference tables and the smoothed p-value map psi.

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "munic/pillow.hpp"
#include "munic/rng.hpp"
#include "munic/subset.hpp"

namespace munic {

enum class TestKind { uniform, sphere, normal, isotropy, elliptic, independence };

std::string to_string(TestKind kind);
TestKind test_kind_from_string(const std::string& s);

struct NullTable {
  TestKind kind = TestKind::uniform;
  int n = 0;
  int p = 0;  // cube dimension
  int R = 0;
  std::uint64_t seed = 0;
  bool collapse_by_cardinality = false;
  // Sorted ascending, length R each. When collapsed, subsets of equal
  // cardinality carry the same list.
  std::map<CoordSubset, std::vector<double>> per_subset;

  const std::vector<double>& entry(CoordSubset mask) const;
};

class TableError : public std::runtime_error {
 public:
  enum class Kind { corrupt_file, version_mismatch, metadata_mismatch, io };
  TableError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Draws one n x p cube sample under the test's null model.
using NullSampler = std::function<CubeSample(int n, int p, Rng& rng)>;

// R replications of the null, sq_norms_all per replication, sorted per
// subset. Deterministic in `seed` regardless of `threads`.
NullTable simulate_null_table(const NullSampler& sampler, TestKind kind, int n, int p,
                              const SubsetFamily& family, int R, std::uint64_t seed,
                              bool collapse_by_cardinality, unsigned threads = 0);

// Gamma moment-match for cardinality h: shape 5^h/2^(h+1), rate 15^h/2.
// (Matching the mean 6^-h and the variance 2*90^-h forces the second
// parameter to be a rate, not a scale.)
std::pair<double, double> gamma_params(int h);

// (#{table values > observed} + 1)/(R + 1).
double grid_pvalue(double observed, const std::vector<double>& table_entry);

// Smoothed p-value: increasing bijection mapping [b(r), b(r+1)] onto
// [r/(R+1), (r+1)/(R+1)] by Gamma-CDF interpolation; exact ties resolved
// by an independent uniform draw from `rng`.
double psi(double observed, const std::vector<double>& table_entry, int h, Rng& rng);

// 1 - psi applied subset-wise (upper-tail p-values, small = extreme);
// aligned with family.masks.
std::vector<double> smoothed_pvalues(const SqNormVector& observed, const SubsetFamily& family,
                                     const NullTable& table, Rng& rng);

// Grid p-value of `raw_pvalue` within `null_pvalues` (first-stage p-values
// recomputed on fresh null samples); small p-values are extreme.
double second_stage_pvalue(double raw_pvalue, const std::vector<double>& null_pvalues);

void save_table(const NullTable& table, const std::string& path);

struct TableRequest {
  TestKind kind;
  int n, p, R;
};

// Loads and validates; rejects unknown versions, corrupt files, and
// metadata that does not match the request.
NullTable load_table(const std::string& path, const TableRequest& expect);

}  // namespace munic
