#include "coarset/controlled_set.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace coarset {

namespace {

void sort_unique(std::vector<ControlledSet::Pair>& pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

}  // namespace

ControlledSet::ControlledSet(int universe, std::vector<Pair> pairs)
    : universe_(universe), pairs_(std::move(pairs)) {
  if (universe_ < 0) throw std::invalid_argument("ControlledSet: negative universe size");
  for (const auto& [x, y] : pairs_) {
    if (x < 0 || x >= universe_ || y < 0 || y >= universe_)
      throw std::invalid_argument("ControlledSet: pair (" + std::to_string(x) + ", " +
                                  std::to_string(y) + ") outside universe of size " +
                                  std::to_string(universe_));
  }
  sort_unique(pairs_);
}

ControlledSet ControlledSet::diagonal(int universe) {
  std::vector<Pair> pairs;
  pairs.reserve(universe);
  for (int x = 0; x < universe; ++x) pairs.emplace_back(x, x);
  return ControlledSet(universe, std::move(pairs));
}

bool ControlledSet::contains(int x, int y) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), Pair{x, y});
}

bool ControlledSet::subset_of(const ControlledSet& other) const {
  check_same_universe(other, "subset_of");
  return std::includes(other.pairs_.begin(), other.pairs_.end(), pairs_.begin(), pairs_.end());
}

void ControlledSet::check_same_universe(const ControlledSet& other, const char* op) const {
  if (universe_ != other.universe_)
    throw std::domain_error(std::string(op) + ": operands live on different point sets (" +
                            std::to_string(universe_) + " vs " +
                            std::to_string(other.universe_) + " points)");
}

ControlledSet ControlledSet::united(const ControlledSet& other) const {
  check_same_universe(other, "united");
  std::vector<Pair> out;
  out.reserve(pairs_.size() + other.pairs_.size());
  std::set_union(pairs_.begin(), pairs_.end(), other.pairs_.begin(), other.pairs_.end(),
                 std::back_inserter(out));
  return ControlledSet(universe_, std::move(out));
}

ControlledSet ControlledSet::intersect(const ControlledSet& other) const {
  check_same_universe(other, "intersect");
  std::vector<Pair> out;
  std::set_intersection(pairs_.begin(), pairs_.end(), other.pairs_.begin(), other.pairs_.end(),
                        std::back_inserter(out));
  return ControlledSet(universe_, std::move(out));
}

ControlledSet ControlledSet::minus(const ControlledSet& other) const {
  check_same_universe(other, "minus");
  std::vector<Pair> out;
  std::set_difference(pairs_.begin(), pairs_.end(), other.pairs_.begin(), other.pairs_.end(),
                      std::back_inserter(out));
  return ControlledSet(universe_, std::move(out));
}

ControlledSet ControlledSet::inverse() const {
  std::vector<Pair> out;
  out.reserve(pairs_.size());
  for (const auto& [x, y] : pairs_) out.emplace_back(y, x);
  return ControlledSet(universe_, std::move(out));
}

ControlledSet ControlledSet::symmetrized() const { return united(inverse()); }

ControlledSet ControlledSet::diagonal_part() const {
  std::vector<Pair> out;
  for (const auto& p : pairs_)
    if (p.first == p.second) out.push_back(p);
  return ControlledSet(universe_, std::move(out));
}

ControlledSet ControlledSet::off_diagonal() const {
  std::vector<Pair> out;
  for (const auto& p : pairs_)
    if (p.first != p.second) out.push_back(p);
  return ControlledSet(universe_, std::move(out));
}

bool ControlledSet::is_symmetric() const {
  for (const auto& [x, y] : pairs_)
    if (!contains(y, x)) return false;
  return true;
}

bool ControlledSet::contains_diagonal() const {
  for (int x = 0; x < universe_; ++x)
    if (!contains(x, x)) return false;
  return true;
}

ControlledSet compose(const ControlledSet& E, const ControlledSet& F) {
  E.check_same_universe(F, "compose");
  // Bucket F by first coordinate, then expand each (x, y) of E through F's
  // row y.  Output is deduplicated by the ControlledSet constructor.
  std::vector<std::vector<int>> row(F.universe());
  for (const auto& [y, z] : F.pairs()) row[y].push_back(z);
  std::vector<ControlledSet::Pair> out;
  for (const auto& [x, y] : E.pairs())
    for (int z : row[y]) out.emplace_back(x, z);
  return ControlledSet(E.universe(), std::move(out));
}

ControlledSet power(const ControlledSet& E, int n) {
  if (n < 1) throw std::invalid_argument("power: exponent must be >= 1, got " + std::to_string(n));
  ControlledSet acc = E;
  for (int i = 1; i < n; ++i) acc = compose(acc, E);
  return acc;
}

int bounded_geometry_constant(const ControlledSet& E) {
  const ControlledSet sym = E.symmetrized();
  int best = 0, run = 0, cur = -1;
  for (const auto& [x, y] : sym.pairs()) {
    (void)y;
    if (x != cur) {
      cur = x;
      run = 0;
    }
    ++run;
    best = std::max(best, run);
  }
  return best;
}

std::optional<int> is_generated_within(const ControlledSet& F, const ControlledSet& E,
                                       int n_max) {
  if (F.universe() != E.universe())
    throw std::domain_error("is_generated_within: operands live on different point sets");
  if (n_max < 1) throw std::invalid_argument("is_generated_within: n_max must be >= 1");
  std::set<std::vector<ControlledSet::Pair>> seen;
  ControlledSet P = E;
  for (int n = 1; n <= n_max; ++n) {
    if (F.subset_of(P)) return n;
    if (!seen.insert(P.pairs()).second) return std::nullopt;  // powers started cycling
    P = compose(P, E);
  }
  return std::nullopt;
}

}  // namespace coarset
