#include "coarset/partial_translation.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace coarset {

PartialTranslation::PartialTranslation(int universe, std::vector<Entry> mapping)
    : universe_(universe), mapping_(std::move(mapping)) {
  if (universe_ < 0) throw std::invalid_argument("PartialTranslation: negative universe size");
  std::sort(mapping_.begin(), mapping_.end());
  mapping_.erase(std::unique(mapping_.begin(), mapping_.end()), mapping_.end());
  std::set<int> targets;
  for (std::size_t i = 0; i < mapping_.size(); ++i) {
    const auto& [x, tx] = mapping_[i];
    if (x < 0 || x >= universe_ || tx < 0 || tx >= universe_)
      throw std::invalid_argument("PartialTranslation: entry (" + std::to_string(x) + " -> " +
                                  std::to_string(tx) + ") outside universe of size " +
                                  std::to_string(universe_));
    if (i > 0 && mapping_[i - 1].first == x)
      throw std::invalid_argument("PartialTranslation: source " + std::to_string(x) +
                                  " mapped twice");
    if (!targets.insert(tx).second)
      throw std::invalid_argument("PartialTranslation: not injective, target " +
                                  std::to_string(tx) + " hit twice");
  }
}

PartialTranslation PartialTranslation::identity_on(int universe, const std::vector<int>& points) {
  std::vector<Entry> mapping;
  mapping.reserve(points.size());
  for (int x : points) mapping.emplace_back(x, x);
  return PartialTranslation(universe, std::move(mapping));
}

std::vector<int> PartialTranslation::domain() const {
  std::vector<int> out;
  out.reserve(mapping_.size());
  for (const auto& [x, tx] : mapping_) {
    (void)tx;
    out.push_back(x);
  }
  return out;
}

std::vector<int> PartialTranslation::range() const {
  std::vector<int> out;
  out.reserve(mapping_.size());
  for (const auto& [x, tx] : mapping_) {
    (void)x;
    out.push_back(tx);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<int> PartialTranslation::apply(int x) const {
  auto it = std::lower_bound(mapping_.begin(), mapping_.end(), Entry{x, -1});
  if (it != mapping_.end() && it->first == x) return it->second;
  return std::nullopt;
}

PartialTranslation PartialTranslation::inverse() const {
  std::vector<Entry> mapping;
  mapping.reserve(mapping_.size());
  for (const auto& [x, tx] : mapping_) mapping.emplace_back(tx, x);
  return PartialTranslation(universe_, std::move(mapping));
}

PartialTranslation PartialTranslation::restricted(const std::vector<int>& points) const {
  std::vector<int> keep = points;
  std::sort(keep.begin(), keep.end());
  std::vector<Entry> mapping;
  for (const auto& e : mapping_)
    if (std::binary_search(keep.begin(), keep.end(), e.first)) mapping.push_back(e);
  return PartialTranslation(universe_, std::move(mapping));
}

bool PartialTranslation::fixed_point_free() const {
  for (const auto& [x, tx] : mapping_)
    if (x == tx) return false;
  return true;
}

bool PartialTranslation::antisymmetric() const {
  const auto dom = domain();
  for (const auto& [x, tx] : mapping_) {
    (void)x;
    if (std::binary_search(dom.begin(), dom.end(), tx)) return false;
  }
  return true;
}

bool PartialTranslation::is_identity() const {
  for (const auto& [x, tx] : mapping_)
    if (x != tx) return false;
  return true;
}

ControlledSet PartialTranslation::graph() const {
  std::vector<ControlledSet::Pair> pairs;
  pairs.reserve(mapping_.size());
  for (const auto& [x, tx] : mapping_) pairs.emplace_back(tx, x);
  return ControlledSet(universe_, std::move(pairs));
}

PartialTranslation compose(const PartialTranslation& s, const PartialTranslation& t) {
  if (s.universe() != t.universe())
    throw std::domain_error("compose: translations live on different point sets");
  std::vector<PartialTranslation::Entry> mapping;
  for (const auto& [x, tx] : t.mapping())
    if (auto stx = s.apply(tx)) mapping.emplace_back(x, *stx);
  return PartialTranslation(t.universe(), std::move(mapping));
}

PartialTranslation merge(const std::vector<PartialTranslation>& parts) {
  if (parts.empty()) return PartialTranslation();
  std::vector<PartialTranslation::Entry> mapping;
  std::set<int> sources, targets;
  for (const auto& p : parts) {
    if (p.universe() != parts.front().universe())
      throw std::domain_error("merge: translations live on different point sets");
    for (const auto& [x, y] : p.mapping()) {
      if (!sources.insert(x).second)
        throw std::domain_error("merge: domains overlap at point " + std::to_string(x));
      if (!targets.insert(y).second)
        throw std::domain_error("merge: ranges overlap at point " + std::to_string(y));
      mapping.emplace_back(x, y);
    }
  }
  return PartialTranslation(parts.front().universe(), std::move(mapping));
}

bool is_elementary(const ControlledSet& E) {
  std::set<int> firsts, seconds;
  for (const auto& [a, b] : E.pairs())
    if (!firsts.insert(a).second || !seconds.insert(b).second) return false;
  return true;
}

std::optional<PartialTranslation> translation_from_graph(const ControlledSet& E) {
  if (!is_elementary(E)) return std::nullopt;
  std::vector<PartialTranslation::Entry> mapping;
  mapping.reserve(E.size());
  for (const auto& [tx, x] : E.pairs()) mapping.emplace_back(x, tx);
  return PartialTranslation(E.universe(), std::move(mapping));
}

}  // namespace coarset
