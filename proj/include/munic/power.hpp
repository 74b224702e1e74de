#pragma once

// Monte Carlo power studies over a one-parameter grid of alternatives.

#include <iosfwd>
#include <string>
#include <vector>

#include "munic/alternatives.hpp"
#include "munic/runner.hpp"

namespace munic {

struct PowerScenario {
  TestKind kind = TestKind::uniform;
  int n = 100;
  int p = 3;  // data dimension (sphere index p for the sphere test)
  AlternativeSpec alternative;
  std::string grid_param;  // swept parameter name
  std::vector<double> grid_values;
  std::vector<std::string> families = {"full"};
  int replications = 500;
  int reps = 199;  // null table size R
  double alpha = 0.05;
  std::uint64_t seed = 1;
  Centering centering = Centering::known_zero;
  unsigned threads = 0;
};

// key=value lines, '#' comments. Alternative parameters use dotted keys
// (alternative.family=vmf, alternative.kappa=0.5,1,2); exactly one value
// list carries commas and becomes the grid.
PowerScenario parse_power_config(std::istream& in);
PowerScenario load_power_config(const std::string& path);

// Data sample for one replication, adapted to the test's input space.
Eigen::MatrixXd sample_for_test(TestKind kind, const AlternativeSpec& alt, int n, int p, Rng& rng);

struct PowerRow {
  double parameter;
  std::string variant;  // "m-<family>" or "s-<family>"
  double power;
  int replications;
  double mc_stderr;
};

std::vector<PowerRow> run_power(const PowerScenario& sc);

// CSV with header parameter,variant,power,replications,mc_stderr.
void write_power_csv(const std::vector<PowerRow>& rows, std::ostream& out);

}  // namespace munic
