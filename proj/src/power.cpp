#include "munic/power.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "munic/parallel.hpp"
#include "munic/special.hpp"

namespace munic {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::invalid_argument("power config: bad numeric value '" + v + "' for " + key);
  }
}

}  // namespace

PowerScenario parse_power_config(std::istream& in) {
  PowerScenario sc;
  bool have_kind = false, have_family = false;
  std::string explicit_grid;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("power config line " + std::to_string(lineno) +
                                  ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "kind") {
      sc.kind = test_kind_from_string(value);
      have_kind = true;
    } else if (key == "n") {
      sc.n = static_cast<int>(to_double(key, value));
    } else if (key == "p") {
      sc.p = static_cast<int>(to_double(key, value));
    } else if (key == "replications") {
      sc.replications = static_cast<int>(to_double(key, value));
    } else if (key == "reps") {
      sc.reps = static_cast<int>(to_double(key, value));
    } else if (key == "alpha") {
      sc.alpha = to_double(key, value);
    } else if (key == "seed") {
      sc.seed = static_cast<std::uint64_t>(std::stoull(value));
    } else if (key == "threads") {
      sc.threads = static_cast<unsigned>(to_double(key, value));
    } else if (key == "families") {
      sc.families = split(value, ',');
      if (sc.families.empty()) throw std::invalid_argument("power config: empty families list");
    } else if (key == "centering") {
      if (value == "known_zero") sc.centering = Centering::known_zero;
      else if (value == "estimated") sc.centering = Centering::estimated;
      else throw std::invalid_argument("power config: centering must be known_zero or estimated");
    } else if (key == "grid") {
      explicit_grid = value;
    } else if (key == "alternative.family") {
      sc.alternative.family = AlternativeSpec::family_from_string(value);
      have_family = true;
    } else if (key.rfind("alternative.", 0) == 0) {
      const std::string pname = key.substr(12);
      if (value.find(',') != std::string::npos) {
        if (!sc.grid_param.empty())
          throw std::invalid_argument("power config: more than one parameter grid");
        sc.grid_param = pname;
        for (const auto& v : split(value, ','))
          if (!v.empty()) sc.grid_values.push_back(to_double(key, v));
        if (sc.grid_values.empty())
          throw std::invalid_argument("power config: empty grid for " + key);
        sc.alternative.params[pname] = sc.grid_values.front();
      } else {
        sc.alternative.params[pname] = to_double(key, value);
      }
    } else {
      throw std::invalid_argument("power config: unknown key '" + key + "'");
    }
  }
  if (!have_kind) throw std::invalid_argument("power config: missing 'kind'");
  if (!have_family) throw std::invalid_argument("power config: missing 'alternative.family'");
  if (!explicit_grid.empty()) {
    if (!sc.grid_param.empty() && sc.grid_param != explicit_grid)
      throw std::invalid_argument("power config: 'grid' names a different parameter "
                                  "than the value list");
    sc.grid_param = explicit_grid;
    if (sc.grid_values.empty()) {
      const auto it = sc.alternative.params.find(explicit_grid);
      if (it == sc.alternative.params.end())
        throw std::invalid_argument("power config: grid parameter '" + explicit_grid +
                                    "' has no value");
      sc.grid_values.push_back(it->second);
    }
  }
  if (sc.grid_param.empty())
    throw std::invalid_argument("power config: no parameter grid (give one alternative.* key "
                                "a comma-separated value list)");
  if (sc.n < 2 || sc.p < 1) throw std::invalid_argument("power config: need n >= 2 and p >= 1");
  if (sc.replications < 1) throw std::invalid_argument("power config: replications must be >= 1");
  return sc;
}

PowerScenario load_power_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open power config '" + path + "'");
  return parse_power_config(in);
}

Eigen::MatrixXd sample_for_test(TestKind kind, const AlternativeSpec& alt, int n, int p, Rng& rng) {
  const TargetSpace space = alt.target_space();
  const Eigen::MatrixXd raw = sample_alternative(alt, p, n, rng);
  switch (kind) {
    case TestKind::uniform:
      if (space == TargetSpace::cube) return raw;
      if (space == TargetSpace::sphere) return sphere_to_cube(raw);
      return raw.unaryExpr([](double z) { return normal_cdf(z); });
    case TestKind::sphere:
      if (space == TargetSpace::sphere) return raw;
      if (space == TargetSpace::cube) return pullback_to_sphere(raw);
      throw std::invalid_argument("Euclidean alternatives have no sphere embedding here");
    default:
      if (space == TargetSpace::euclidean) return raw;
      if (space == TargetSpace::cube) return pullback_to_euclidean(raw);
      throw std::invalid_argument("sphere alternatives do not feed Euclidean-input tests");
  }
}

std::vector<PowerRow> run_power(const PowerScenario& sc) {
  const int data_cols = (sc.kind == TestKind::sphere) ? sc.p + 1 : sc.p;
  const int p_cube = cube_dimension(sc.kind, data_cols);

  struct Variant {
    std::string family;
    const NullTable* table;
  };
  std::vector<NullTable> tables;
  tables.reserve(sc.families.size());
  std::vector<Variant> variants;
  for (const auto& fam : sc.families) {
    const SubsetFamily resolved = SubsetFamily::parse(fam, p_cube);
    const NullTable* table = nullptr;
    if (table_cacheable(sc.kind)) {
      tables.push_back(prepare_table(sc.kind, sc.n, p_cube, resolved, sc.reps, sc.seed,
                                     default_collapse(sc.kind), sc.threads, ""));
      table = &tables.back();
    }
    variants.push_back({fam, table});
  }

  const std::size_t G = sc.grid_values.size();
  const std::size_t B = static_cast<std::size_t>(sc.replications);
  const std::size_t V = variants.size();
  // rejects[(g * B + r) * 2V + 2v + {0: m, 1: s}]
  std::vector<unsigned char> rejects(G * B * 2 * V, 0);

  const Rng root(sc.seed);
  parallel_for(G * B, sc.threads, [&](std::size_t idx) {
    const std::size_t g = idx / B;
    const std::size_t r = idx % B;
    AlternativeSpec alt = sc.alternative;
    alt.params[sc.grid_param] = sc.grid_values[g];
    Rng data_rng = root.substream(10, g, r);
    const Eigen::MatrixXd data = sample_for_test(sc.kind, alt, sc.n, sc.p, data_rng);
    Rng seed_rng = root.substream(11, g, r);
    for (std::size_t v = 0; v < V; ++v) {
      RunOptions opt;
      opt.kind = sc.kind;
      opt.alpha = sc.alpha;
      opt.reps = sc.reps;
      opt.family = variants[v].family;
      opt.seed = seed_rng.next_u64();
      opt.centering = sc.centering;
      opt.threads = 1;
      opt.table = variants[v].table;
      const TestReport rep = run_test(data, opt);
      rejects[idx * 2 * V + 2 * v + 0] = rep.m.reject ? 1 : 0;
      rejects[idx * 2 * V + 2 * v + 1] = rep.s.reject ? 1 : 0;
    }
  });

  std::vector<PowerRow> rows;
  for (std::size_t g = 0; g < G; ++g) {
    for (std::size_t v = 0; v < V; ++v) {
      for (int which = 0; which < 2; ++which) {
        std::size_t hits = 0;
        for (std::size_t r = 0; r < B; ++r)
          hits += rejects[(g * B + r) * 2 * V + 2 * v + which];
        const double power = static_cast<double>(hits) / static_cast<double>(B);
        PowerRow row;
        row.parameter = sc.grid_values[g];
        row.variant = std::string(which == 0 ? "m-" : "s-") + variants[v].family;
        row.power = power;
        row.replications = static_cast<int>(B);
        row.mc_stderr = std::sqrt(power * (1.0 - power) / static_cast<double>(B));
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void write_power_csv(const std::vector<PowerRow>& rows, std::ostream& out) {
  out << "parameter,variant,power,replications,mc_stderr\n";
  for (const auto& r : rows) {
    std::ostringstream line;
    line.precision(10);
    line << r.parameter << ',' << r.variant << ',' << r.power << ',' << r.replications << ','
         << r.mc_stderr << '\n';
    out << line.str();
  }
}

}  // namespace munic
