#pragma once

// Seeded instance generators shared by the unit tests and the acceptance
// suite.  All randomness flows through Rng, which avoids the distribution
// classes of <random> so that streams are identical on every platform.

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include <random>

#include "coarset/algebra.hpp"
#include "coarset/controlled_set.hpp"
#include "coarset/partial_translation.hpp"
#include "coarset/space.hpp"

namespace testsupport {

class Rng {
public:
  explicit Rng(unsigned long long seed) : eng_(seed) {}

  unsigned long long raw() { return eng_(); }

  int below(int n) {  // uniform-ish over [0, n); n > 0
    return static_cast<int>(eng_() % static_cast<unsigned long long>(n));
  }

  double unit() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }

  double symmetric() { return 2.0 * unit() - 1.0; }

  template <typename T>
  void shuffle(std::vector<T>& v) {  // Fisher–Yates, portable order
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) std::swap(v[i], v[below(i + 1)]);
  }

private:
  std::mt19937_64 eng_;
};

inline coarset::ComponentSpec random_component(Rng& rng, int size, int extra_edges) {
  std::set<std::pair<int, int>> edges;
  for (int i = 1; i < size; ++i) {
    const int p = rng.below(i);
    edges.emplace(std::min(p, i), std::max(p, i));
  }
  for (int k = 0; k < extra_edges; ++k) {
    const int a = rng.below(size);
    const int b = rng.below(size);
    if (a != b) edges.emplace(std::min(a, b), std::max(a, b));
  }
  return {size, {edges.begin(), edges.end()}};
}

inline coarset::CoarseSpace random_connected_space(Rng& rng, int size, int extra_edges) {
  return coarset::CoarseSpace({random_component(rng, size, extra_edges)});
}

inline coarset::CoarseSpace random_multi_space(Rng& rng, int components, int max_size,
                                               int extra_edges) {
  std::vector<coarset::ComponentSpec> specs;
  specs.reserve(components);
  for (int c = 0; c < components; ++c)
    specs.push_back(random_component(rng, 1 + rng.below(max_size), extra_edges));
  return coarset::CoarseSpace(std::move(specs));
}

/// Symmetric controlled set inside the components of X: `tries` random pairs,
/// each inserted with its reverse, plus the diagonal when requested.
inline coarset::ControlledSet random_symmetric_set(Rng& rng, const coarset::CoarseSpace& X,
                                                   int tries, bool with_diagonal) {
  std::vector<std::pair<int, int>> pairs;
  for (int k = 0; k < tries; ++k) {
    const int c = rng.below(X.num_components());
    const int off = X.component_offset(c);
    const int s = X.component_size(c);
    const int a = off + rng.below(s);
    const int b = off + rng.below(s);
    pairs.emplace_back(a, b);
    pairs.emplace_back(b, a);
  }
  if (with_diagonal)
    for (int x = 0; x < X.num_points(); ++x) pairs.emplace_back(x, x);
  return coarset::ControlledSet(X.num_points(), std::move(pairs));
}

inline coarset::PartialTranslation random_translation(Rng& rng, int universe, int size) {
  std::vector<int> sources(universe), targets(universe);
  for (int i = 0; i < universe; ++i) sources[i] = targets[i] = i;
  rng.shuffle(sources);
  rng.shuffle(targets);
  std::vector<coarset::PartialTranslation::Entry> entries;
  for (int i = 0; i < size && i < universe; ++i) entries.emplace_back(sources[i], targets[i]);
  std::sort(entries.begin(), entries.end());
  return coarset::PartialTranslation(universe, std::move(entries));
}

inline coarset::PartialTranslation random_fpf_translation(Rng& rng, int universe, int size) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const auto t = random_translation(rng, universe, size);
    if (t.fixed_point_free()) return t;
  }
  throw std::runtime_error("random_fpf_translation: no fixed-point-free draw in 1000 attempts");
}

/// Entries at a random subset of the positions of E, values in the unit box.
inline coarset::TranslationOp random_operator(Rng& rng, const coarset::CoarseSpace& X,
                                              const coarset::ControlledSet& E, double fill) {
  std::vector<coarset::SparseMatrix<coarset::cplx>::Triplet> trips;
  for (const auto& [x, y] : E.pairs())
    if (rng.unit() < fill) trips.push_back({x, y, {rng.symmetric(), rng.symmetric()}});
  return coarset::TranslationOp(
      X, coarset::SparseMatrix<coarset::cplx>(X.num_points(), X.num_points(), std::move(trips)));
}

/// Pairing-model cubic graph, redrawn until simple and connected.
inline coarset::CoarseSpace random_three_regular(Rng& rng, int n) {
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("random_three_regular: order must be even and at least 4");
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<int> stubs(3 * n);
    for (int i = 0; i < 3 * n; ++i) stubs[i] = i / 3;
    rng.shuffle(stubs);
    std::set<std::pair<int, int>> edges;
    bool simple = true;
    for (int i = 0; i + 1 < 3 * n && simple; i += 2) {
      const int a = stubs[i], b = stubs[i + 1];
      if (a == b || !edges.emplace(std::min(a, b), std::max(a, b)).second) simple = false;
    }
    if (!simple) continue;
    std::vector<std::vector<int>> adj(n);
    for (const auto& [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::vector<int> seen(n, 0), stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
    }
    if (count != n) continue;
    return coarset::CoarseSpace({coarset::ComponentSpec{n, {edges.begin(), edges.end()}}});
  }
  throw std::runtime_error("random_three_regular: no simple connected pairing in 10000 attempts");
}

/// Chops every component into runs of at most max_block consecutive points;
/// each run's first point is its marker.  Valid input for explicit-block
/// partitions by construction.
inline std::vector<std::pair<int, std::vector<int>>> random_blocks(Rng& rng,
                                                                   const coarset::CoarseSpace& X,
                                                                   int max_block) {
  std::vector<std::pair<int, std::vector<int>>> assoc;
  for (int c = 0; c < X.num_components(); ++c) {
    const int off = X.component_offset(c);
    const int s = X.component_size(c);
    int i = 0;
    while (i < s) {
      const int len = std::min(s - i, 1 + rng.below(max_block));
      std::vector<int> members;
      for (int j = 0; j < len; ++j) members.push_back(off + i + j);
      assoc.emplace_back(members[rng.below(len)], members);
      i += len;
    }
  }
  return assoc;
}

}  // namespace testsupport
