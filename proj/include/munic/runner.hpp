#pragma once

// End-to-end orchestration: reduce the data to a cube sample, calibrate
// against the matching null model, combine.

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "munic/combiners.hpp"
#include "munic/transforms.hpp"

namespace munic {

struct RunOptions {
  TestKind kind = TestKind::uniform;
  double alpha = 0.05;
  int reps = 999;
  std::string family = "full";
  std::uint64_t seed = 1;
  std::string cache_dir;  // empty disables table caching
  Centering centering = Centering::estimated;
  bool double_calibrate = false;
  int second_stage_reps = 200;
  std::optional<bool> collapse;  // defaulted per kind when unset
  unsigned threads = 0;
  // Reuse a prebuilt table (power studies); metadata must match.
  const NullTable* table = nullptr;
};

// Cube dimension the statistics live in, given the data's column count.
int cube_dimension(TestKind kind, int data_cols);

// Whether equal-cardinality subsets share one null law under this kind.
bool default_collapse(TestKind kind);

// Normality refits per replication, so its table depends on the data.
bool table_cacheable(TestKind kind);

// Null-model sampler for the data-independent kinds; throws for normal.
NullSampler null_sampler_for(TestKind kind);

TestReport run_test(const Eigen::MatrixXd& data, const RunOptions& opt);

// Build (or load from cache) the null table a run with these options
// would use. Only for cacheable kinds.
NullTable prepare_table(TestKind kind, int n, int p_cube, const SubsetFamily& family, int R,
                        std::uint64_t seed, bool collapse, unsigned threads,
                        const std::string& cache_dir);

}  // namespace munic
