#pragma once

#include <utility>
#include <vector>

#include "coarset/controlled_set.hpp"

namespace coarset {

/// One connected block of a space: `size` points with an undirected edge list
/// in local 0-based ids.
struct ComponentSpec {
  int size = 0;
  std::vector<std::pair<int, int>> edges;
};

/// A finite disjoint union of connected graphs, with a global point numbering
/// (component 0 first, then component 1, ...) and the generating controlled
/// set gen = symmetrized edges ∪ diagonal.
///
/// Components must each be connected under their edges; the constructor
/// rejects inputs that are not.
class CoarseSpace {
public:
  explicit CoarseSpace(std::vector<ComponentSpec> components);

  int num_points() const { return num_points_; }
  int num_components() const { return static_cast<int>(sizes_.size()); }
  int component_of(int x) const;
  int component_offset(int c) const { return offsets_.at(c); }
  int component_size(int c) const { return sizes_.at(c); }

  const ControlledSet& gen() const { return gen_; }
  /// Undirected edges of component c in local ids, sorted, i < j.
  const std::vector<std::pair<int, int>>& component_edges(int c) const { return edges_.at(c); }

  /// True when every pair of E joins two points of the same component.
  bool pairs_within_components(const ControlledSet& E) const;

  friend bool operator==(const CoarseSpace&, const CoarseSpace&) = default;

private:
  int num_points_ = 0;
  std::vector<int> offsets_;
  std::vector<int> sizes_;
  std::vector<std::vector<std::pair<int, int>>> edges_;  // per component, local ids
  std::vector<int> component_of_;
  ControlledSet gen_;
};

/// Concatenates the components of several spaces into one space.
CoarseSpace disjoint_union(const std::vector<CoarseSpace>& spaces);

// Small stock builders used all over the tests and the box-space module.
CoarseSpace make_cycle(int n);     // C_n (n >= 3)
CoarseSpace make_path(int n);      // path on n vertices
CoarseSpace make_complete(int n);  // K_n

}  // namespace coarset
