#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace coarset {

/// A finite binary relation on the point set {0, ..., universe-1}.
///
/// Pairs are stored sorted lexicographically and deduplicated, so equality,
/// subset tests and iteration order are canonical.  All set-level operations
/// return new values; nothing here mutates in place.
class ControlledSet {
public:
  using Pair = std::pair<int, int>;

  ControlledSet() = default;
  ControlledSet(int universe, std::vector<Pair> pairs);

  static ControlledSet diagonal(int universe);

  int universe() const { return universe_; }
  const std::vector<Pair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  bool contains(int x, int y) const;
  bool subset_of(const ControlledSet& other) const;

  ControlledSet united(const ControlledSet& other) const;
  ControlledSet intersect(const ControlledSet& other) const;
  ControlledSet minus(const ControlledSet& other) const;

  /// {(y, x) : (x, y) in E}
  ControlledSet inverse() const;
  /// E ∪ E⁻¹
  ControlledSet symmetrized() const;
  /// Pairs (x, x) of E.
  ControlledSet diagonal_part() const;
  /// Pairs (x, y) of E with x != y.
  ControlledSet off_diagonal() const;

  bool is_symmetric() const;
  bool contains_diagonal() const;  // every (x, x), x in universe

  friend bool operator==(const ControlledSet&, const ControlledSet&) = default;

private:
  int universe_ = 0;
  std::vector<Pair> pairs_;

  void check_same_universe(const ControlledSet& other, const char* op) const;

  friend ControlledSet compose(const ControlledSet&, const ControlledSet&);
};

/// E ∘ F = {(x, z) : (x, y) in E and (y, z) in F for some y}.
ControlledSet compose(const ControlledSet& E, const ControlledSet& F);

/// n-fold composition E ∘ ... ∘ E; n must be >= 1.
ControlledSet power(const ControlledSet& E, int n);

/// N(E) = max over points x of |{y : (x, y) in E ∪ E⁻¹}|.  0 for empty E.
int bounded_geometry_constant(const ControlledSet& E);

/// Smallest n <= n_max with F ⊆ E^{∘n}, if any.  The sequence of powers is
/// eventually periodic (it need not be monotone when E misses diagonal
/// pairs), so the search also stops early once a power repeats.
std::optional<int> is_generated_within(const ControlledSet& F,
                                       const ControlledSet& E, int n_max);

}  // namespace coarset
