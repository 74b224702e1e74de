#include "munic/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "munic/parallel.hpp"
#include "munic/special.hpp"

namespace munic {

namespace {
constexpr std::uint64_t kStreamTable = 1;
}

std::string to_string(TestKind kind) {
  switch (kind) {
    case TestKind::uniform: return "uniform";
    case TestKind::sphere: return "sphere";
    case TestKind::normal: return "normal";
    case TestKind::isotropy: return "isotropy";
    case TestKind::elliptic: return "elliptic";
    case TestKind::independence: return "independence";
  }
  return "?";
}

TestKind test_kind_from_string(const std::string& s) {
  if (s == "uniform") return TestKind::uniform;
  if (s == "sphere") return TestKind::sphere;
  if (s == "normal") return TestKind::normal;
  if (s == "isotropy") return TestKind::isotropy;
  if (s == "elliptic") return TestKind::elliptic;
  if (s == "independence") return TestKind::independence;
  throw std::invalid_argument("unknown test kind '" + s + "'");
}

const std::vector<double>& NullTable::entry(CoordSubset mask) const {
  const auto it = per_subset.find(mask);
  if (it == per_subset.end())
    throw std::invalid_argument("NullTable: no entry for requested subset");
  return it->second;
}

NullTable simulate_null_table(const NullSampler& sampler, TestKind kind, int n, int p,
                              const SubsetFamily& family, int R, std::uint64_t seed,
                              bool collapse_by_cardinality, unsigned threads) {
  if (R < 99) throw std::invalid_argument("simulate_null_table: R must be >= 99");
  if (n < 1) throw std::invalid_argument("simulate_null_table: n must be >= 1");

  std::vector<SqNormVector> rows(static_cast<std::size_t>(R));
  const Rng root(seed);
  parallel_for(static_cast<std::size_t>(R), threads, [&](std::size_t r) {
    Rng rng = root.substream(kStreamTable, r);
    const CubeSample sample = sampler(n, p, rng);
    rows[r] = sq_norms_all(sample, family);
  });

  NullTable table;
  table.kind = kind;
  table.n = n;
  table.p = p;
  table.R = R;
  table.seed = seed;
  table.collapse_by_cardinality = collapse_by_cardinality;

  for (std::size_t i = 0; i < family.masks.size(); ++i) {
    std::vector<double> column(static_cast<std::size_t>(R));
    for (int r = 0; r < R; ++r) column[static_cast<std::size_t>(r)] = rows[static_cast<std::size_t>(r)][i];
    std::sort(column.begin(), column.end());
    table.per_subset.emplace(family.masks[i], std::move(column));
  }

  if (collapse_by_cardinality) {
    // All subsets of equal cardinality share the representative's list
    // (lowest mask of that cardinality in the family).
    std::map<int, CoordSubset> rep;
    for (CoordSubset m : family.masks) {
      const int h = subset_cardinality(m);
      if (!rep.count(h)) rep[h] = m;
    }
    for (CoordSubset m : family.masks) {
      const CoordSubset r = rep[subset_cardinality(m)];
      if (r != m) table.per_subset[m] = table.per_subset[r];
    }
  }
  return table;
}

std::pair<double, double> gamma_params(int h) {
  if (h < 1) throw std::invalid_argument("gamma_params: cardinality must be >= 1");
  const double shape = std::pow(5.0, h) / std::pow(2.0, h + 1);
  const double rate = std::pow(15.0, h) / 2.0;
  return {shape, rate};
}

double grid_pvalue(double observed, const std::vector<double>& table_entry) {
  const auto R = static_cast<double>(table_entry.size());
  const auto above = table_entry.end() -
                     std::upper_bound(table_entry.begin(), table_entry.end(), observed);
  return (static_cast<double>(above) + 1.0) / (R + 1.0);
}

double psi(double observed, const std::vector<double>& table_entry, int h, Rng& rng) {
  if (observed < 0.0) throw std::invalid_argument("psi: observed must be >= 0");
  const auto [shape, rate] = gamma_params(h);
  const int R = static_cast<int>(table_entry.size());
  const double denom_grid = static_cast<double>(R) + 1.0;

  const auto lo = std::lower_bound(table_entry.begin(), table_entry.end(), observed);
  const auto hi = std::upper_bound(table_entry.begin(), table_entry.end(), observed);
  if (lo != hi) {
    // observed equals the run b(r) = ... = b(s) of order statistics
    const int r = static_cast<int>(lo - table_entry.begin()) + 1;
    const int s = static_cast<int>(hi - table_entry.begin());
    if (r == s) return static_cast<double>(r) / denom_grid;
    return rng.uniform(static_cast<double>(r) / denom_grid, static_cast<double>(s) / denom_grid);
  }

  // interior of the cell [b(r), b(r+1)], r = #{values < observed}
  const int r = static_cast<int>(lo - table_entry.begin());
  const double cell_lo = (r == 0) ? 0.0 : table_entry[static_cast<std::size_t>(r - 1)];
  const double g_lo = (r == 0) ? 0.0 : gamma_cdf(cell_lo, shape, rate);
  const bool top = (r == R);
  const double g_obs = gamma_cdf(observed, shape, rate);
  const double g_hi = top ? 1.0 : gamma_cdf(table_entry[static_cast<std::size_t>(r)], shape, rate);

  double frac;
  if (g_hi - g_lo > 0.0) {
    frac = (g_obs - g_lo) / (g_hi - g_lo);
  } else if (!top) {
    // Gamma CDF flat across the cell: fall back to linear interpolation in y
    const double cell_hi = table_entry[static_cast<std::size_t>(r)];
    frac = (cell_hi > cell_lo) ? (observed - cell_lo) / (cell_hi - cell_lo) : 0.0;
  } else {
    // unbounded top cell with Gamma mass exhausted
    frac = 1.0 - std::exp(cell_lo - observed);
  }
  if (frac < 0.0) frac = 0.0;
  if (frac >= 1.0) frac = std::nextafter(1.0, 0.0);
  return (static_cast<double>(r) + frac) / denom_grid;
}

std::vector<double> smoothed_pvalues(const SqNormVector& observed, const SubsetFamily& family,
                                     const NullTable& table, Rng& rng) {
  if (observed.size() != family.masks.size())
    throw std::invalid_argument("smoothed_pvalues: observed/family size mismatch");
  std::vector<double> out(observed.size());
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const CoordSubset mask = family.masks[i];
    // dedicated substream per subset so tie draws are order-independent
    Rng tie_rng = rng.substream(0x7165, mask);
    // psi estimates the null c.d.f.; the p-value is its upper-tail
    // complement, so large squared norms give small p-values. At an order
    // statistic b(r) this equals the grid p-value (R+1-r)/(R+1) exactly.
    out[i] = 1.0 - psi(observed[i], table.entry(mask), subset_cardinality(mask), tie_rng);
  }
  return out;
}

double second_stage_pvalue(double raw_pvalue, const std::vector<double>& null_pvalues) {
  std::size_t below = 0;
  for (double v : null_pvalues)
    if (v < raw_pvalue) ++below;
  return (static_cast<double>(below) + 1.0) /
         (static_cast<double>(null_pvalues.size()) + 1.0);
}

namespace {
constexpr const char* kTableHeader = "munic-null-table v1";
}

void save_table(const NullTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw TableError(TableError::Kind::io, "cannot open '" + path + "' for writing");
  out << kTableHeader << "\n";
  out << "kind=" << to_string(table.kind) << " n=" << table.n << " p=" << table.p
      << " R=" << table.R << " seed=" << table.seed
      << " collapse=" << (table.collapse_by_cardinality ? 1 : 0) << "\n";
  char buf[64];
  for (const auto& [mask, values] : table.per_subset) {
    std::snprintf(buf, sizeof(buf), "%x", mask);
    out << "H=" << buf << " values=";
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
      out << (i ? "," : "") << buf;
    }
    out << "\n";
  }
  if (!out) throw TableError(TableError::Kind::io, "write failed for '" + path + "'");
}

NullTable load_table(const std::string& path, const TableRequest& expect) {
  std::ifstream in(path);
  if (!in) throw TableError(TableError::Kind::io, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw TableError(TableError::Kind::corrupt_file, "empty table file '" + path + "'");
  if (line != kTableHeader) {
    if (line.rfind("munic-null-table", 0) == 0)
      throw TableError(TableError::Kind::version_mismatch, "unknown table version: " + line);
    throw TableError(TableError::Kind::corrupt_file, "not a null-table file: '" + path + "'");
  }
  if (!std::getline(in, line))
    throw TableError(TableError::Kind::corrupt_file, "missing metadata line in '" + path + "'");

  NullTable table;
  {
    std::istringstream meta(line);
    std::string tok;
    bool have_kind = false, have_n = false, have_p = false, have_R = false, have_seed = false,
         have_collapse = false;
    while (meta >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw TableError(TableError::Kind::corrupt_file, "bad metadata token: " + tok);
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      try {
        if (key == "kind") { table.kind = test_kind_from_string(val); have_kind = true; }
        else if (key == "n") { table.n = std::stoi(val); have_n = true; }
        else if (key == "p") { table.p = std::stoi(val); have_p = true; }
        else if (key == "R") { table.R = std::stoi(val); have_R = true; }
        else if (key == "seed") { table.seed = std::stoull(val); have_seed = true; }
        else if (key == "collapse") { table.collapse_by_cardinality = (val == "1"); have_collapse = true; }
        else throw TableError(TableError::Kind::corrupt_file, "unknown metadata key: " + key);
      } catch (const TableError&) {
        throw;
      } catch (const std::exception&) {
        throw TableError(TableError::Kind::corrupt_file, "bad metadata value: " + tok);
      }
    }
    if (!(have_kind && have_n && have_p && have_R && have_seed && have_collapse))
      throw TableError(TableError::Kind::corrupt_file, "incomplete metadata line");
  }

  if (table.kind != expect.kind || table.n != expect.n || table.p != expect.p ||
      table.R != expect.R)
    throw TableError(TableError::Kind::metadata_mismatch,
                     "table metadata does not match the request (" + to_string(table.kind) +
                         ", n=" + std::to_string(table.n) + ", p=" + std::to_string(table.p) +
                         ", R=" + std::to_string(table.R) + ")");

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("H=", 0) != 0)
      throw TableError(TableError::Kind::corrupt_file, "bad subset line: " + line);
    const auto sp = line.find(" values=");
    if (sp == std::string::npos)
      throw TableError(TableError::Kind::corrupt_file, "bad subset line: " + line);
    CoordSubset mask = 0;
    try {
      mask = static_cast<CoordSubset>(std::stoul(line.substr(2, sp - 2), nullptr, 16));
    } catch (const std::exception&) {
      throw TableError(TableError::Kind::corrupt_file, "bad subset mask in: " + line);
    }
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(table.R));
    std::istringstream vs(line.substr(sp + 8));
    std::string num;
    while (std::getline(vs, num, ',')) {
      try {
        values.push_back(std::stod(num));
      } catch (const std::exception&) {
        throw TableError(TableError::Kind::corrupt_file, "bad value '" + num + "'");
      }
    }
    if (values.size() != static_cast<std::size_t>(table.R))
      throw TableError(TableError::Kind::corrupt_file,
                       "subset list length != R in: " + line.substr(0, sp));
    if (!std::is_sorted(values.begin(), values.end()))
      throw TableError(TableError::Kind::corrupt_file, "subset list not sorted ascending");
    table.per_subset.emplace(mask, std::move(values));
  }
  if (table.per_subset.empty())
    throw TableError(TableError::Kind::corrupt_file, "table has no subset lists");
  return table;
}

}  // namespace munic
