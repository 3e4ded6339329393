#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "coarset/controlled_set.hpp"

namespace coarset {

/// An injective map t : A -> B between two subsets of {0, ..., universe-1},
/// stored as (x, t(x)) pairs sorted by source.
///
/// Its graph as a controlled set follows the "wrong way round" convention
/// graph(t) = {(t(x), x)}, so that graph(s ∘ t) = graph(s) ∘ graph(t).
class PartialTranslation {
public:
  using Entry = std::pair<int, int>;  // (source, target)

  PartialTranslation() = default;
  PartialTranslation(int universe, std::vector<Entry> mapping);

  static PartialTranslation identity_on(int universe, const std::vector<int>& points);

  int universe() const { return universe_; }
  const std::vector<Entry>& mapping() const { return mapping_; }
  std::size_t size() const { return mapping_.size(); }
  bool empty() const { return mapping_.empty(); }

  std::vector<int> domain() const;
  std::vector<int> range() const;
  std::optional<int> apply(int x) const;

  PartialTranslation inverse() const;
  /// Restriction of t to domain ∩ points.
  PartialTranslation restricted(const std::vector<int>& points) const;

  bool fixed_point_free() const;
  /// domain ∩ range = ∅.
  bool antisymmetric() const;
  bool is_identity() const;

  ControlledSet graph() const;

  friend bool operator==(const PartialTranslation&, const PartialTranslation&) = default;

private:
  int universe_ = 0;
  std::vector<Entry> mapping_;
};

/// s ∘ t : x ↦ s(t(x)), defined where t(x) lies in the domain of s.
PartialTranslation compose(const PartialTranslation& s, const PartialTranslation& t);

/// Union of translations with pairwise disjoint domains and ranges;
/// throws std::domain_error on a clash.
PartialTranslation merge(const std::vector<PartialTranslation>& parts);

/// True when E is the graph of some partial translation (no repeated first or
/// second coordinate).
bool is_elementary(const ControlledSet& E);

/// Reads a partial translation back off its graph; nullopt when E is not
/// elementary.
std::optional<PartialTranslation> translation_from_graph(const ControlledSet& E);

}  // namespace coarset
