#include "munic/combiners.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "munic/special.hpp"

#include "json.hpp"

namespace munic {

double m_threshold(double alpha, int family_size) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("m_threshold: alpha outside (0,1)");
  if (family_size < 1) throw std::invalid_argument("m_threshold: family size must be >= 1");
  return 1.0 - std::pow(1.0 - alpha, 1.0 / static_cast<double>(family_size));
}

MTestResult m_test(const std::vector<double>& pvals, double alpha) {
  if (pvals.empty()) throw std::invalid_argument("m_test: empty p-value vector");
  MTestResult r;
  r.statistic = *std::min_element(pvals.begin(), pvals.end());
  r.threshold = m_threshold(alpha, static_cast<int>(pvals.size()));
  r.reject = r.statistic < r.threshold;
  return r;
}

STestResult s_test(const std::vector<double>& pvals, double alpha) {
  if (pvals.empty()) throw std::invalid_argument("s_test: empty p-value vector");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("s_test: alpha outside (0,1)");
  constexpr double kFloor = 1e-15;
  STestResult r;
  for (double p : pvals) {
    if (p >= 1.0) continue;  // Q(0) = 0 contribution
    if (p <= 0.0) {
      p = kFloor;
      r.saturated = true;
    }
    r.statistic += chi2_quantile(1.0 - p, 1.0);
  }
  r.pvalue = chi2_sf(r.statistic, static_cast<double>(pvals.size()));
  r.reject = r.pvalue < alpha;
  return r;
}

std::string TestReport::to_json() const {
  nlohmann::json j;
  j["test_kind"] = to_string(kind);
  j["n"] = n;
  j["p"] = p;
  j["alpha"] = alpha;
  j["R"] = R;
  j["seed"] = seed;
  j["family"] = family.describe();
  nlohmann::json subsets = nlohmann::json::array();
  for (std::size_t i = 0; i < family.masks.size(); ++i) {
    subsets.push_back({{"mask", family.masks[i]},
                       {"sq_norm", per_subset_stats[i]},
                       {"p_value", per_subset_pvalues[i]}});
  }
  j["subsets"] = std::move(subsets);
  j["m"] = {{"stat", m.statistic}, {"threshold", m.threshold}, {"reject", m.reject}};
  j["s"] = {{"stat", s.statistic}, {"p_value", s.pvalue}, {"reject", s.reject}};
  if (second_stage) {
    j["second_stage"] = {{"m_p_value", m_second_stage_pvalue},
                         {"s_p_value", s_second_stage_pvalue}};
  }
  j["warnings"] = warnings;
  return j.dump(2);
}

}  // namespace munic
