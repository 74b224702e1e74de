// munic: goodness-of-fit tests built on the zero-marginal decomposition
// of the empirical process, plus a power-study harness.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "CLI11.hpp"

#include "munic/power.hpp"
#include "munic/runner.hpp"

namespace {

constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitError = 2;

Eigen::MatrixXd read_csv(const std::string& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && skip_header) continue;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream is(line);
    std::string cell;
    while (std::getline(is, cell, ',')) {
      try {
        std::size_t pos = 0;
        row.push_back(std::stod(cell, &pos));
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size()) throw std::invalid_argument("");
      } catch (...) {
        throw std::runtime_error("malformed CSV: non-numeric cell '" + cell + "' at " + path +
                                 ":" + std::to_string(lineno));
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("malformed CSV: row " + std::to_string(lineno) + " has " +
                               std::to_string(row.size()) + " columns, expected " +
                               std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("input file '" + path + "' contains no data rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

void print_report(const munic::TestReport& r) {
  std::printf("test: %s   n=%d p=%d alpha=%g R=%d seed=%llu family=%s\n",
              munic::to_string(r.kind).c_str(), r.n, r.p, r.alpha, r.R,
              static_cast<unsigned long long>(r.seed), r.family.describe().c_str());
  std::printf("%-8s %-14s %s\n", "subset", "sq_norm", "p_value");
  for (std::size_t i = 0; i < r.family.masks.size(); ++i)
    std::printf("0x%-6x %-14.6g %.6g\n", r.family.masks[i], r.per_subset_stats[i],
                r.per_subset_pvalues[i]);
  std::printf("m-test: min p = %.6g, threshold = %.6g -> %s\n", r.m.statistic, r.m.threshold,
              r.m.reject ? "REJECT" : "accept");
  std::printf("s-test: stat = %.6g, p = %.6g -> %s\n", r.s.statistic, r.s.pvalue,
              r.s.reject ? "REJECT" : "accept");
  if (r.second_stage)
    std::printf("second stage: m p = %.6g, s p = %.6g\n", r.m_second_stage_pvalue,
                r.s_second_stage_pvalue);
  for (const auto& w : r.warnings) std::printf("warning: %s\n", w.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"goodness-of-fit tests via zero-marginal empirical-process components"};
  app.require_subcommand(1);

  // ---- test ----
  std::string kind_str, input_path, family = "full", cache_dir = "./munic-cache";
  double alpha = 0.05;
  int reps = 999;
  std::uint64_t seed = 1;
  bool json = false, header = false, double_calibrate = false;
  bool centered = false, fixed_center = false;
  unsigned threads = 0;
  int collapse_flag = -1;

  auto* test_cmd = app.add_subcommand("test", "run a test on a CSV sample");
  test_cmd->add_option("kind", kind_str, "uniform|sphere|normal|isotropy|elliptic|independence")
      ->required();
  test_cmd->add_option("--input", input_path, "CSV file, one observation per row")->required();
  test_cmd->add_option("--alpha", alpha, "test level");
  test_cmd->add_option("--reps", reps, "null-table replications R");
  test_cmd->add_option("--family", family, "full|min2|max:h");
  test_cmd->add_option("--seed", seed, "RNG seed");
  test_cmd->add_option("--cache", cache_dir, "null-table cache directory ('' disables)");
  test_cmd->add_option("--threads", threads, "worker threads (0 = auto)");
  auto* opt_centered = test_cmd->add_flag(
      "--centered", centered, "isotropy/elliptic: estimate and subtract the sample mean (default)");
  test_cmd->add_flag("--fixed-center", fixed_center,
                     "isotropy/elliptic: the center is known to be zero")
      ->excludes(opt_centered);
  test_cmd->add_flag("--double-calibrate", double_calibrate,
                     "second-stage calibration of the combined p-values");
  test_cmd->add_flag("--json", json, "emit a JSON report");
  test_cmd->add_flag("--header", header, "skip one CSV header line");
  test_cmd->add_flag("--collapse,!--no-collapse", collapse_flag,
                     "share null tables across equal-cardinality subsets");

  // ---- simulate-null ----
  std::string sn_kind, sn_out, sn_family = "full";
  int sn_n = 0, sn_p = 0, sn_reps = 999;
  std::uint64_t sn_seed = 1;
  int sn_collapse_flag = -1;
  unsigned sn_threads = 0;
  auto* sim_cmd = app.add_subcommand("simulate-null", "prebuild a null table file");
  sim_cmd->add_option("kind", sn_kind, "uniform|sphere|isotropy|elliptic|independence")->required();
  sim_cmd->add_option("--n", sn_n, "sample size")->required();
  sim_cmd->add_option("--p", sn_p, "cube dimension")->required();
  sim_cmd->add_option("--reps", sn_reps, "replications R");
  sim_cmd->add_option("--seed", sn_seed, "RNG seed");
  sim_cmd->add_option("--family", sn_family, "full|min2|max:h");
  sim_cmd->add_option("--out", sn_out, "output table path")->required();
  sim_cmd->add_option("--threads", sn_threads, "worker threads (0 = auto)");
  sim_cmd->add_flag("--collapse,!--no-collapse", sn_collapse_flag,
                    "share null tables across equal-cardinality subsets");

  // ---- power ----
  std::string pw_config, pw_out;
  unsigned pw_threads = 0;
  auto* pow_cmd = app.add_subcommand("power", "run a power study from a config file");
  pow_cmd->add_option("--config", pw_config, "key=value scenario config")->required();
  pow_cmd->add_option("--out", pw_out, "output CSV path")->required();
  pow_cmd->add_option("--threads", pw_threads, "worker threads (0 = auto, overrides config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*test_cmd) {
      munic::RunOptions opt;
      opt.kind = munic::test_kind_from_string(kind_str);
      opt.alpha = alpha;
      opt.reps = reps;
      opt.family = family;
      opt.seed = seed;
      opt.cache_dir = cache_dir;
      opt.centering = fixed_center ? munic::Centering::known_zero : munic::Centering::estimated;
      opt.double_calibrate = double_calibrate;
      opt.threads = threads;
      if (collapse_flag >= 0) opt.collapse = collapse_flag > 0;
      const Eigen::MatrixXd data = read_csv(input_path, header);
      const munic::TestReport report = munic::run_test(data, opt);
      if (json)
        std::cout << report.to_json() << "\n";
      else
        print_report(report);
      return (report.m.reject || report.s.reject) ? kExitReject : kExitAccept;
    }
    if (*sim_cmd) {
      const munic::TestKind kind = munic::test_kind_from_string(sn_kind);
      const munic::SubsetFamily fam = munic::SubsetFamily::parse(sn_family, sn_p);
      const bool collapse =
          sn_collapse_flag >= 0 ? sn_collapse_flag > 0 : munic::default_collapse(kind);
      const munic::NullTable table = munic::simulate_null_table(
          munic::null_sampler_for(kind), kind, sn_n, sn_p, fam, sn_reps, sn_seed, collapse,
          sn_threads);
      munic::save_table(table, sn_out);
      std::cout << "wrote " << sn_out << "\n";
      return kExitAccept;
    }
    if (*pow_cmd) {
      munic::PowerScenario sc = munic::load_power_config(pw_config);
      if (pw_threads > 0) sc.threads = pw_threads;
      const std::vector<munic::PowerRow> rows = munic::run_power(sc);
      std::ofstream out(pw_out);
      if (!out) throw std::runtime_error("cannot open output file '" + pw_out + "'");
      munic::write_power_csv(rows, out);
      std::cout << "wrote " << pw_out << "\n";
      return kExitAccept;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
