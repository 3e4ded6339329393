#include "coarset/space.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace coarset {

namespace {

bool connected(int size, const std::vector<std::pair<int, int>>& edges) {
  if (size <= 1) return true;
  std::vector<std::vector<int>> adj(size);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(size, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
  }
  return reached == size;
}

}  // namespace

CoarseSpace::CoarseSpace(std::vector<ComponentSpec> components) {
  std::vector<ControlledSet::Pair> gen_pairs;
  for (std::size_t c = 0; c < components.size(); ++c) {
    auto& spec = components[c];
    if (spec.size <= 0)
      throw std::invalid_argument("CoarseSpace: component " + std::to_string(c) +
                                  " has non-positive size");
    std::vector<std::pair<int, int>> local;
    for (auto [a, b] : spec.edges) {
      if (a < 0 || a >= spec.size || b < 0 || b >= spec.size)
        throw std::invalid_argument("CoarseSpace: component " + std::to_string(c) +
                                    " edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                    ") outside its " + std::to_string(spec.size) + " points");
      if (a == b) continue;
      local.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(local.begin(), local.end());
    local.erase(std::unique(local.begin(), local.end()), local.end());
    if (!connected(spec.size, local))
      throw std::invalid_argument("CoarseSpace: component " + std::to_string(c) +
                                  " is not connected under its edges");

    const int base = num_points_;
    offsets_.push_back(base);
    sizes_.push_back(spec.size);
    num_points_ += spec.size;
    for (int i = 0; i < spec.size; ++i) component_of_.push_back(static_cast<int>(c));
    for (const auto& [a, b] : local) {
      gen_pairs.emplace_back(base + a, base + b);
      gen_pairs.emplace_back(base + b, base + a);
    }
    edges_.push_back(std::move(local));
  }
  for (int x = 0; x < num_points_; ++x) gen_pairs.emplace_back(x, x);
  gen_ = ControlledSet(num_points_, std::move(gen_pairs));
}

int CoarseSpace::component_of(int x) const {
  if (x < 0 || x >= num_points_)
    throw std::invalid_argument("component_of: point " + std::to_string(x) +
                                " outside space of " + std::to_string(num_points_) + " points");
  return component_of_[x];
}

bool CoarseSpace::pairs_within_components(const ControlledSet& E) const {
  if (E.universe() != num_points_) return false;
  for (const auto& [x, y] : E.pairs())
    if (component_of_[x] != component_of_[y]) return false;
  return true;
}

CoarseSpace disjoint_union(const std::vector<CoarseSpace>& spaces) {
  std::vector<ComponentSpec> specs;
  for (const auto& s : spaces)
    for (int c = 0; c < s.num_components(); ++c)
      specs.push_back({s.component_size(c), s.component_edges(c)});
  return CoarseSpace(std::move(specs));
}

CoarseSpace make_cycle(int n) {
  if (n < 3) throw std::invalid_argument("make_cycle: need n >= 3");
  ComponentSpec spec;
  spec.size = n;
  for (int i = 0; i < n; ++i) spec.edges.emplace_back(i, (i + 1) % n);
  return CoarseSpace({spec});
}

CoarseSpace make_path(int n) {
  if (n < 1) throw std::invalid_argument("make_path: need n >= 1");
  ComponentSpec spec;
  spec.size = n;
  for (int i = 0; i + 1 < n; ++i) spec.edges.emplace_back(i, i + 1);
  return CoarseSpace({spec});
}

CoarseSpace make_complete(int n) {
  if (n < 1) throw std::invalid_argument("make_complete: need n >= 1");
  ComponentSpec spec;
  spec.size = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) spec.edges.emplace_back(i, j);
  return CoarseSpace({spec});
}

}  // namespace coarset
