#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace munic {

// A nonempty coordinate subset H of {1..p}, bit j-1 set <=> j in H.
using CoordSubset = std::uint32_t;

inline int subset_cardinality(CoordSubset mask) { return std::popcount(mask); }

constexpr int kMaxDimension = 20;

// Which subsets of {1..p} a test looks at.
struct SubsetFamily {
  enum class Kind { full, min_card, max_card };

  Kind kind = Kind::full;
  int card_bound = 0;  // h for min_card / max_card
  std::vector<CoordSubset> masks;

  static SubsetFamily resolve(Kind kind, int p, int card_bound = 0) {
    if (p < 1 || p > kMaxDimension)
      throw std::invalid_argument("SubsetFamily: dimension out of range [1,20]");
    if (kind == Kind::full && p > 16)
      throw std::invalid_argument("SubsetFamily: full family needs p <= 16; use a partial family");
    SubsetFamily f;
    f.kind = kind;
    f.card_bound = card_bound;
    const CoordSubset all = (p >= 32) ? ~0u : ((1u << p) - 1u);
    for (CoordSubset m = 1; m <= all; ++m) {
      const int h = subset_cardinality(m);
      if (kind == Kind::min_card && h < card_bound) continue;
      if (kind == Kind::max_card && h > card_bound) continue;
      f.masks.push_back(m);
    }
    if (f.masks.empty()) throw std::invalid_argument("SubsetFamily: empty family");
    return f;
  }

  // "full", "min2", "max:h"
  static SubsetFamily parse(const std::string& s, int p) {
    if (s == "full") return resolve(Kind::full, p);
    if (s == "min2") return resolve(Kind::min_card, p, 2);
    if (s.rfind("max:", 0) == 0) {
      const int h = std::stoi(s.substr(4));
      if (h < 1) throw std::invalid_argument("SubsetFamily: max:h needs h >= 1");
      return resolve(Kind::max_card, p, h);
    }
    throw std::invalid_argument("SubsetFamily: unknown family spec '" + s + "'");
  }

  std::string describe() const {
    switch (kind) {
      case Kind::full: return "full";
      case Kind::min_card: return "min" + std::to_string(card_bound);
      case Kind::max_card: return "max:" + std::to_string(card_bound);
    }
    return "?";
  }

  std::size_t size() const { return masks.size(); }
  bool is_partial() const { return kind != Kind::full; }
};

}  // namespace munic
