#include "doctest.h"

#include <filesystem>
#include <sstream>

#include "munic/power.hpp"
#include "munic/runner.hpp"

using namespace munic;

namespace {

Eigen::MatrixXd gaussian_matrix(int n, int p, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd z(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) z(i, j) = rng.normal();
  return z;
}

}  // namespace

TEST_CASE("cube dimension and per-kind defaults") {
  CHECK(cube_dimension(TestKind::uniform, 3) == 3);
  CHECK(cube_dimension(TestKind::sphere, 3) == 2);  // unit vectors in R^3
  CHECK(cube_dimension(TestKind::normal, 4) == 4);
  CHECK(cube_dimension(TestKind::isotropy, 4) == 4);
  CHECK(cube_dimension(TestKind::independence, 2) == 2);

  CHECK(default_collapse(TestKind::uniform));
  CHECK(default_collapse(TestKind::sphere));
  CHECK(default_collapse(TestKind::independence));
  CHECK_FALSE(default_collapse(TestKind::normal));
  CHECK_FALSE(default_collapse(TestKind::isotropy));
  CHECK_FALSE(default_collapse(TestKind::elliptic));

  CHECK(table_cacheable(TestKind::uniform));
  CHECK_FALSE(table_cacheable(TestKind::normal));
  CHECK_THROWS(null_sampler_for(TestKind::normal));
}

TEST_CASE("runs are deterministic in the seed and thread count") {
  RunOptions opt;
  opt.kind = TestKind::uniform;
  opt.reps = 99;
  opt.seed = 41;
  Rng rng(100);
  const CubeSample x = uniform_cube_sample(40, 3, rng);

  const std::string a = run_test(x, opt).to_json();
  const std::string b = run_test(x, opt).to_json();
  CHECK(a == b);

  opt.threads = 4;
  CHECK(run_test(x, opt).to_json() == a);

  opt.threads = 0;
  opt.seed = 42;
  CHECK(run_test(x, opt).to_json() != a);
}

TEST_CASE("cached tables reproduce the inline result") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "munic-runner-cache-test";
  fs::remove_all(dir);
  fs::create_directories(dir);

  RunOptions opt;
  opt.kind = TestKind::independence;
  opt.reps = 99;
  opt.seed = 7;
  const Eigen::MatrixXd z = gaussian_matrix(35, 2, 5);

  const std::string inline_json = run_test(z, opt).to_json();
  opt.cache_dir = dir.string();
  const std::string first = run_test(z, opt).to_json();   // builds and saves
  CHECK_FALSE(fs::is_empty(dir));
  const std::string second = run_test(z, opt).to_json();  // loads
  CHECK(first == inline_json);
  CHECK(second == inline_json);
  fs::remove_all(dir);
}

TEST_CASE("prebuilt table reuse must match the run metadata") {
  const SubsetFamily fam = SubsetFamily::resolve(SubsetFamily::Kind::full, 2);
  const NullTable table = prepare_table(TestKind::uniform, 30, 2, fam, 99, 7, true, 0, "");
  RunOptions opt;
  opt.kind = TestKind::uniform;
  opt.reps = 99;
  opt.seed = 7;
  opt.table = &table;
  Rng rng(8);
  const CubeSample x = uniform_cube_sample(30, 2, rng);
  CHECK_NOTHROW(run_test(x, opt));
  const CubeSample wrong_n = uniform_cube_sample(31, 2, rng);
  CHECK_THROWS(run_test(wrong_n, opt));
}

TEST_CASE("report carries the run description and the second stage") {
  RunOptions opt;
  opt.kind = TestKind::normal;
  opt.reps = 99;
  opt.seed = 11;
  opt.double_calibrate = true;
  opt.second_stage_reps = 25;
  const Eigen::MatrixXd z = gaussian_matrix(50, 2, 6);
  const TestReport rep = run_test(z, opt);
  CHECK(rep.kind == TestKind::normal);
  CHECK(rep.n == 50);
  CHECK(rep.p == 2);
  CHECK(rep.R == 99);
  CHECK(rep.per_subset_stats.size() == 3);
  CHECK(rep.per_subset_pvalues.size() == 3);
  CHECK(rep.second_stage);
  CHECK(rep.m_second_stage_pvalue >= 0.0);
  CHECK(rep.m_second_stage_pvalue <= 1.0);
  CHECK(rep.s_second_stage_pvalue >= 0.0);
  // a clean gaussian sample should not be rejected at these sizes
  CHECK(rep.m_second_stage_pvalue > 0.01);
}

TEST_CASE("partial families leave a warning in the report") {
  RunOptions opt;
  opt.kind = TestKind::uniform;
  opt.reps = 99;
  opt.family = "min2";
  Rng rng(12);
  const CubeSample x = uniform_cube_sample(30, 3, rng);
  const TestReport rep = run_test(x, opt);
  CHECK(rep.per_subset_pvalues.size() == 4);
  bool mentioned = false;
  for (const auto& w : rep.warnings) mentioned |= (w.find("family") != std::string::npos);
  CHECK(mentioned);
}

TEST_CASE("power config parsing") {
  std::istringstream in(
      "# scenario\n"
      "kind=sphere\n"
      "n=50\n"
      "p=2\n"
      "alternative.family=vmf\n"
      "alternative.kappa=0.25,0.5,1\n"
      "families=full,min2\n"
      "replications=100\n"
      "reps=99\n"
      "alpha=0.05\n"
      "seed=3\n");
  const PowerScenario sc = parse_power_config(in);
  CHECK(sc.kind == TestKind::sphere);
  CHECK(sc.n == 50);
  CHECK(sc.p == 2);
  CHECK(sc.alternative.family == AlternativeSpec::Family::vmf);
  CHECK(sc.grid_param == "kappa");
  CHECK(sc.grid_values == std::vector<double>{0.25, 0.5, 1.0});
  CHECK(sc.families == std::vector<std::string>{"full", "min2"});
  CHECK(sc.replications == 100);
  CHECK(sc.reps == 99);
  CHECK(sc.seed == 3);

  std::istringstream no_grid("kind=uniform\nalternative.family=copula_normal\nalternative.rho=0.5\n");
  CHECK_THROWS(parse_power_config(no_grid));
  std::istringstream two_grids(
      "kind=uniform\nalternative.family=copula_normal\n"
      "alternative.rho=0.1,0.2\nalternative.theta=1,2\n");
  CHECK_THROWS(parse_power_config(two_grids));
  std::istringstream bad_key("kind=uniform\nalternative.family=vmf\nalternative.kappa=1,2\nwat=1\n");
  CHECK_THROWS(parse_power_config(bad_key));
}

TEST_CASE("sample adapters route each alternative to the right space") {
  Rng rng(13);
  AlternativeSpec vmf;
  vmf.family = AlternativeSpec::Family::vmf;
  vmf.params["kappa"] = 0.5;
  // sphere test consumes unit rows in R^(p+1)
  const Eigen::MatrixXd s = sample_for_test(TestKind::sphere, vmf, 20, 2, rng);
  REQUIRE(s.cols() == 3);
  for (int i = 0; i < 20; ++i) CHECK(std::fabs(s.row(i).norm() - 1.0) < 1e-9);
  // uniform test consumes the cube image of the same draws
  const Eigen::MatrixXd u = sample_for_test(TestKind::uniform, vmf, 20, 2, rng);
  REQUIRE(u.cols() == 2);
  CHECK(u.minCoeff() >= 0.0);
  CHECK(u.maxCoeff() <= 1.0);

  AlternativeSpec cop;
  cop.family = AlternativeSpec::Family::copula_normal;
  cop.params["rho"] = 0.4;
  // euclidean tests get the normal-quantile pullback of cube draws
  const Eigen::MatrixXd e = sample_for_test(TestKind::normal, cop, 20, 2, rng);
  REQUIRE(e.cols() == 2);
  CHECK(e.minCoeff() < 0.0);

  AlternativeSpec t3;
  t3.family = AlternativeSpec::Family::multivariate_t;
  t3.params["df"] = 3.0;
  CHECK_THROWS(sample_for_test(TestKind::sphere, t3, 20, 2, rng));
}

TEST_CASE("power study output shape and determinism") {
  PowerScenario sc;
  sc.kind = TestKind::uniform;
  sc.n = 30;
  sc.p = 2;
  sc.alternative.family = AlternativeSpec::Family::copula_normal;
  sc.grid_param = "rho";
  sc.grid_values = {0.0, 0.7};
  sc.replications = 60;
  sc.reps = 99;
  sc.seed = 9;
  const std::vector<PowerRow> rows = run_power(sc);
  REQUIRE(rows.size() == 4);  // 2 grid points x {m, s}
  for (const auto& r : rows) {
    CHECK(r.replications == 60);
    CHECK(r.power >= 0.0);
    CHECK(r.power <= 1.0);
    CHECK(r.mc_stderr >= 0.0);
  }
  // strong dependence beats independence for both variants
  CHECK(rows[2].power > rows[0].power);
  CHECK(rows[3].power > rows[1].power);

  sc.threads = 3;
  const std::vector<PowerRow> again = run_power(sc);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(again[i].power == rows[i].power);
    CHECK(again[i].variant == rows[i].variant);
  }

  std::ostringstream csv;
  write_power_csv(rows, csv);
  CHECK(csv.str().rfind("parameter,variant,power,replications,mc_stderr\n", 0) == 0);
}
