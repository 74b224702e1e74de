#pragma once

// Turns a smoothed p-value vector into the m-test and s-test decisions.

#include <cstdint>
#include <string>
#include <vector>

#include "munic/calibration.hpp"
#include "munic/subset.hpp"

namespace munic {

// 1 - (1 - alpha)^(1/m): the per-subset threshold giving the m-test
// family-wise level alpha.
double m_threshold(double alpha, int family_size);

struct MTestResult {
  double statistic = 1.0;  // min p-value over the family
  double threshold = 0.0;
  bool reject = false;
};

MTestResult m_test(const std::vector<double>& pvals, double alpha);

struct STestResult {
  double statistic = 0.0;  // sum of chi2_1 quantiles at 1 - p
  double pvalue = 1.0;     // chi2_m upper tail
  bool reject = false;
  bool saturated = false;  // some p-value hit the numerical floor
};

STestResult s_test(const std::vector<double>& pvals, double alpha);

struct TestReport {
  TestKind kind = TestKind::uniform;
  int n = 0;
  int p = 0;  // cube dimension the statistics were computed in
  double alpha = 0.05;
  int R = 0;
  std::uint64_t seed = 0;
  SubsetFamily family;
  SqNormVector per_subset_stats;
  std::vector<double> per_subset_pvalues;
  MTestResult m;
  STestResult s;
  bool second_stage = false;
  double m_second_stage_pvalue = -1.0;  // set when second_stage
  double s_second_stage_pvalue = -1.0;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

}  // namespace munic
