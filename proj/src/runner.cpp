#include "munic/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "munic/parallel.hpp"

namespace munic {

int cube_dimension(TestKind kind, int data_cols) {
  switch (kind) {
    case TestKind::sphere:
      if (data_cols < 2) throw std::invalid_argument("sphere test needs ambient dimension >= 2");
      return data_cols - 1;
    case TestKind::isotropy:
    case TestKind::elliptic:
      if (data_cols < 2) throw std::invalid_argument("test needs dimension >= 2");
      return data_cols;
    default:
      if (data_cols < 1) throw std::invalid_argument("empty sample");
      return data_cols;
  }
}

bool default_collapse(TestKind kind) {
  switch (kind) {
    case TestKind::uniform:
    case TestKind::sphere:
    case TestKind::independence:
      return true;
    default:
      return false;
  }
}

bool table_cacheable(TestKind kind) { return kind != TestKind::normal; }

NullSampler null_sampler_for(TestKind kind) {
  switch (kind) {
    case TestKind::uniform:
    case TestKind::sphere:
      return [](int n, int p, Rng& rng) { return uniform_cube_sample(n, p, rng); };
    case TestKind::isotropy:
      return [](int n, int p, Rng& rng) { return isotropy_null_sample(n, p, rng); };
    case TestKind::elliptic:
      // Whitening by the estimated scatter shrinks the statistics, so the
      // table must carry the same effect: draw N(0, I) and retransform.
      // Equivariance makes the resulting law free of the true scatter.
      return [](int n, int p, Rng& rng) {
        Eigen::MatrixXd z(n, p);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < p; ++j) z(i, j) = rng.normal();
        return ellipticity_transform(z, Centering::known_zero);
      };
    case TestKind::independence:
      return [](int n, int p, Rng& rng) { return independence_null_sample(n, p, rng); };
    case TestKind::normal:
      throw std::invalid_argument("the normality null depends on the fitted sample; "
                                  "its table cannot be presimulated");
  }
  throw std::logic_error("unreachable");
}

namespace {

std::string cache_path(const std::string& dir, TestKind kind, int n, int p, int R,
                       std::uint64_t seed, bool collapse, const SubsetFamily& family) {
  std::ostringstream os;
  os << dir << '/' << to_string(kind) << "-n" << n << "-p" << p << "-R" << R << "-s" << seed
     << "-c" << (collapse ? 1 : 0) << "-" << family.describe() << ".table";
  return os.str();
}

}  // namespace

NullTable prepare_table(TestKind kind, int n, int p_cube, const SubsetFamily& family, int R,
                        std::uint64_t seed, bool collapse, unsigned threads,
                        const std::string& cache_dir) {
  const NullSampler sampler = null_sampler_for(kind);
  std::string path;
  if (!cache_dir.empty() && table_cacheable(kind)) {
    path = cache_path(cache_dir, kind, n, p_cube, R, seed, collapse, family);
    if (std::filesystem::exists(path)) {
      try {
        return load_table(path, {kind, n, p_cube, R});
      } catch (const TableError&) {
        // stale or corrupt cache entry: fall through and rebuild
      }
    }
  }
  NullTable table = simulate_null_table(sampler, kind, n, p_cube, family, R, seed, collapse, threads);
  if (!path.empty()) {
    std::filesystem::create_directories(cache_dir);
    save_table(table, path);
  }
  return table;
}

TestReport run_test(const Eigen::MatrixXd& data, const RunOptions& opt) {
  const int n = static_cast<int>(data.rows());
  if (n < 2) throw std::invalid_argument("need at least two observations");

  TestReport report;
  report.kind = opt.kind;
  report.n = n;
  report.alpha = opt.alpha;
  report.R = opt.reps;
  report.seed = opt.seed;

  NormalityContext ctx;
  CubeSample cube;
  switch (opt.kind) {
    case TestKind::uniform:
      cube = data;
      validate_cube_sample(cube);
      break;
    case TestKind::sphere:
      cube = sphere_to_cube(data);
      break;
    case TestKind::normal: {
      auto fitted = normality_transform(data);
      cube = std::move(fitted.first);
      ctx = std::move(fitted.second);
      break;
    }
    case TestKind::isotropy:
      cube = isotropy_transform(data, opt.centering, &report.warnings);
      break;
    case TestKind::elliptic:
      cube = ellipticity_transform(data, opt.centering, &report.warnings);
      break;
    case TestKind::independence:
      cube = independence_transform(data, &report.warnings);
      break;
  }
  const int p_cube = static_cast<int>(cube.cols());
  report.p = p_cube;

  report.family = SubsetFamily::parse(opt.family, p_cube);
  if (report.family.is_partial())
    report.warnings.push_back(
        "partial subset family: the tests are blind to deviations whose "
        "zero-marginal mass sits entirely on excluded subsets");

  const bool collapse = opt.collapse.value_or(default_collapse(opt.kind));
  const NullSampler sampler = (opt.kind == TestKind::normal)
      ? NullSampler([&ctx](int nn, int, Rng& rng) { return normality_null_sample(ctx, nn, rng); })
      : null_sampler_for(opt.kind);

  NullTable owned_table;
  const NullTable* table = opt.table;
  if (table != nullptr) {
    if (table->kind != opt.kind || table->n != n || table->p != p_cube || table->R != opt.reps)
      throw std::invalid_argument("supplied null table does not match this run");
  } else {
    if (table_cacheable(opt.kind)) {
      owned_table = prepare_table(opt.kind, n, p_cube, report.family, opt.reps, opt.seed, collapse,
                                  opt.threads, opt.cache_dir);
    } else {
      owned_table = simulate_null_table(sampler, opt.kind, n, p_cube, report.family, opt.reps,
                                        opt.seed, collapse, opt.threads);
    }
    table = &owned_table;
  }

  report.per_subset_stats = sq_norms_all(cube, report.family);
  Rng tie_rng(opt.seed);
  report.per_subset_pvalues =
      smoothed_pvalues(report.per_subset_stats, report.family, *table, tie_rng);
  report.m = m_test(report.per_subset_pvalues, opt.alpha);
  report.s = s_test(report.per_subset_pvalues, opt.alpha);
  if (report.s.saturated)
    report.warnings.push_back("a smoothed p-value hit the numerical floor; the s statistic "
                              "is a lower bound");

  if (opt.double_calibrate) {
    const int N2 = opt.second_stage_reps;
    if (N2 < 1) throw std::invalid_argument("second-stage replication count must be >= 1");
    std::vector<double> null_m(N2), null_s(N2);
    const Rng root(opt.seed);
    parallel_for(static_cast<std::size_t>(N2), opt.threads, [&](std::size_t i) {
      Rng rep_rng = root.substream(3, static_cast<std::uint64_t>(i));
      const CubeSample null_cube = sampler(n, p_cube, rep_rng);
      const SqNormVector stats = sq_norms_all(null_cube, report.family);
      Rng tie = rep_rng.substream(4);
      const std::vector<double> pv = smoothed_pvalues(stats, report.family, *table, tie);
      null_m[i] = *std::min_element(pv.begin(), pv.end());
      null_s[i] = s_test(pv, opt.alpha).pvalue;
    });
    report.second_stage = true;
    report.m_second_stage_pvalue = second_stage_pvalue(report.m.statistic, null_m);
    report.s_second_stage_pvalue = second_stage_pvalue(report.s.pvalue, null_s);
    report.m.reject = report.m_second_stage_pvalue < opt.alpha;
    report.s.reject = report.s_second_stage_pvalue < opt.alpha;
  }

  return report;
}

}  // namespace munic
