#include "coarset/decomp.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <string>

namespace coarset {

Tripartition tripartition(const PartialTranslation& t) {
  for (const auto& [x, tx] : t.mapping())
    if (x == tx)
      throw std::domain_error("tripartition: translation fixes point " + std::to_string(x));

  const auto dom = t.domain();
  auto in_domain = [&](int p) { return std::binary_search(dom.begin(), dom.end(), p); };
  const PartialTranslation tinv = t.inverse();

  Tripartition out;
  std::vector<char> assigned(std::max(1, t.universe()), 0);
  auto assign = [&](int p, int part) {
    out.parts[part].push_back(p);
    assigned[p] = 1;
  };

  // Chains first: heads are the domain points with no t-predecessor inside
  // the domain.  Alternate parts 0/1 along the walk.
  for (int head : dom) {
    auto pred = tinv.apply(head);
    if (pred && in_domain(*pred)) continue;
    int cur = head;
    for (int i = 0;; ++i) {
      assign(cur, i % 2);
      auto nxt = t.apply(cur);
      if (!nxt || !in_domain(*nxt)) break;
      cur = *nxt;
    }
  }
  // What is left lies on cycles.  Enumerate each from its minimum id; an
  // odd-length cycle parks its final point in part 2.
  for (int rep : dom) {
    if (assigned[rep]) continue;
    std::vector<int> cyc;
    int cur = rep;
    do {
      cyc.push_back(cur);
      cur = *t.apply(cur);
    } while (cur != rep);
    const int len = static_cast<int>(cyc.size());
    for (int i = 0; i < len; ++i) {
      const bool closes_odd = (len % 2 == 1 && i == len - 1);
      assign(cyc[i], closes_odd ? 2 : i % 2);
    }
  }
  for (auto& part : out.parts) std::sort(part.begin(), part.end());
  return out;
}

std::vector<PartialTranslation> split_antisymmetric(const PartialTranslation& t) {
  std::vector<PartialTranslation> out;
  for (const auto& part : tripartition(t).parts) {
    if (part.empty()) continue;
    out.push_back(t.restricted(part));
  }
  return out;
}

ControlledSet ElementaryDecomposition::reassemble() const {
  ControlledSet acc = base.united(diagonal);
  for (const auto& t : pieces) acc = acc.united(t.graph().symmetrized());
  return acc;
}

ElementaryDecomposition elementary_decomposition(const ControlledSet& F,
                                                 const ControlledSet& E) {
  if (!F.is_symmetric())
    throw std::domain_error("elementary_decomposition: set to decompose is not symmetric");
  if (!E.is_symmetric())
    throw std::domain_error("elementary_decomposition: base set is not symmetric");
  if (!E.subset_of(F))
    throw std::domain_error("elementary_decomposition: base set is not contained in the set "
                            "being decomposed");

  ControlledSet rest = F.minus(E);
  const ControlledSet diag = rest.diagonal_part();
  rest = rest.minus(diag);

  std::vector<ControlledSet> raw;
  while (!rest.empty()) {
    std::vector<ControlledSet::Pair> keep;
    std::set<int> used_targets, used_sources;
    std::set<ControlledSet::Pair> chosen;
    for (const auto& [a, b] : rest.pairs()) {
      if (used_targets.count(a) || used_sources.count(b)) continue;
      if (chosen.count({b, a})) continue;  // never pair an edge with its reverse
      keep.emplace_back(a, b);
      chosen.insert({a, b});
      used_targets.insert(a);
      used_sources.insert(b);
    }
    ControlledSet piece(rest.universe(), std::move(keep));
    rest = rest.minus(piece.symmetrized());
    raw.push_back(std::move(piece));
  }

  // Every pair of a later piece was blocked in each earlier one, which pins a
  // distinct neighbour of one of its endpoints per earlier piece; that caps
  // the greedy stage at 2N(F) - 1 rounds.
  const int cap = std::max(1, 2 * bounded_geometry_constant(F) - 1);
  if (static_cast<int>(raw.size()) > cap)
    throw std::logic_error("elementary_decomposition: greedy stage exceeded its termination "
                           "bound (" + std::to_string(raw.size()) + " > " + std::to_string(cap) +
                           " pieces)");

  ElementaryDecomposition out{E, diag, {}};
  for (const auto& piece : raw) {
    auto t = translation_from_graph(piece);
    if (!t) throw std::logic_error("elementary_decomposition: greedy piece is not elementary");
    for (auto& part : split_antisymmetric(*t)) out.pieces.push_back(std::move(part));
  }
  return out;
}

PartialTranslation FactorBlock::composed() const {
  if (chain.empty()) return PartialTranslation();
  PartialTranslation acc = chain.front();
  for (std::size_t j = 1; j < chain.size(); ++j) acc = compose(chain[j], acc);
  return acc;
}

PartialTranslation Factorisation::reassemble() const {
  std::vector<PartialTranslation> parts;
  parts.reserve(blocks.size());
  for (const auto& blk : blocks) parts.push_back(blk.composed());
  return merge(parts);
}

Factorisation factor_through(const PartialTranslation& t, const ControlledSet& E, int n) {
  if (n < 1)
    throw std::invalid_argument("factor_through: chain length must be >= 1, got " +
                                std::to_string(n));
  if (t.universe() != E.universe())
    throw std::domain_error("factor_through: translation and controlled set live on "
                            "different point sets");
  const ControlledSet En = power(E, n);
  for (const auto& [x, tx] : t.mapping())
    if (!En.contains(tx, x))
      throw std::domain_error("factor_through: graph pair (" + std::to_string(tx) + ", " +
                              std::to_string(x) + ") is outside the " + std::to_string(n) +
                              "-fold composition of the controlled set");

  const int U = E.universe();
  // One E-step leads from z to w exactly when (w, z) is a pair of E.
  std::vector<std::vector<int>> step(U), back(U);
  for (const auto& [w, z] : E.pairs()) {
    step[z].push_back(w);
    back[w].push_back(z);  // ascending in z: pairs iterate lexicographically
  }
  for (auto& v : step) std::sort(v.begin(), v.end());

  const auto dom = t.domain();
  std::vector<std::vector<int>> chain(dom.size());

  for (std::size_t i = 0; i < dom.size(); ++i) {
    const int x = dom[i];
    const int target = *t.apply(x);
    std::vector<int> dist(U, -1);
    std::deque<int> q{x};
    dist[x] = 0;
    while (!q.empty()) {
      const int z = q.front();
      q.pop_front();
      for (int w : step[z])
        if (dist[w] < 0) {
          dist[w] = dist[z] + 1;
          q.push_back(w);
        }
    }

    std::vector<int> c;
    const bool loop_at_target = E.contains(target, target);
    if (dist[target] >= 0 && dist[target] <= n && (dist[target] == n || loop_at_target)) {
      // Shortest path, smallest-id predecessor at every step, identity
      // padding at the target once the path is exhausted.
      c.assign(dist[target] + 1, -1);
      c[dist[target]] = target;
      for (int j = dist[target]; j > 0; --j)
        for (int p : back[c[j]])
          if (dist[p] == j - 1) {
            c[j - 1] = p;
            break;
          }
      c.resize(n + 1, target);
    } else {
      // No loop to pad with: build a chain of length exactly n through the
      // layered reachable sets, again taking the smallest id at each step.
      std::vector<std::vector<char>> layer(n + 1, std::vector<char>(U, 0));
      layer[0][x] = 1;
      for (int j = 0; j < n; ++j)
        for (int z = 0; z < U; ++z)
          if (layer[j][z])
            for (int w : step[z]) layer[j + 1][w] = 1;
      if (!layer[n][target])
        throw std::logic_error("factor_through: containment check passed but no exact-length "
                               "chain was found");
      c.assign(n + 1, -1);
      c[n] = target;
      for (int j = n; j > 0; --j)
        for (int p : back[c[j]])
          if (layer[j - 1][p]) {
            c[j - 1] = p;
            break;
          }
    }
    chain[i] = std::move(c);
  }

  // Group domain points so that on each block every chain stage is injective
  // and consecutive stages are either equal or have disjoint images.  One
  // refinement sweep per chain position, first-fit in id order.
  std::vector<std::vector<int>> classes;
  if (!dom.empty()) {
    classes.emplace_back(dom.size());
    for (std::size_t i = 0; i < dom.size(); ++i) classes[0][i] = static_cast<int>(i);
  }
  for (int j = 1; j <= n; ++j) {
    std::vector<std::vector<int>> next;
    for (const auto& cls : classes) {
      std::vector<int> ident, movers;
      for (int i : cls) (chain[i][j] == chain[i][j - 1] ? ident : movers).push_back(i);
      if (!ident.empty()) next.push_back(std::move(ident));
      std::vector<std::vector<int>> subs;
      std::vector<std::set<int>> img_cur, img_prev;
      for (int i : movers) {
        const int a = chain[i][j - 1], b = chain[i][j];
        bool placed = false;
        for (std::size_t s = 0; s < subs.size(); ++s) {
          if (img_cur[s].count(b) || img_prev[s].count(b) || img_cur[s].count(a)) continue;
          subs[s].push_back(i);
          img_cur[s].insert(b);
          img_prev[s].insert(a);
          placed = true;
          break;
        }
        if (!placed) {
          subs.push_back({i});
          img_cur.push_back({b});
          img_prev.push_back({a});
        }
      }
      for (auto& s : subs) next.push_back(std::move(s));
    }
    classes = std::move(next);
  }

  Factorisation out;
  out.power = n;
  for (auto& cls : classes) {
    std::sort(cls.begin(), cls.end());
    FactorBlock blk;
    for (int i : cls) blk.points.push_back(dom[i]);
    for (int j = 1; j <= n; ++j) {
      std::vector<PartialTranslation::Entry> m;
      for (int i : cls) m.emplace_back(chain[i][j - 1], chain[i][j]);
      blk.chain.emplace_back(U, std::move(m));
    }
    out.blocks.push_back(std::move(blk));
  }
  std::sort(out.blocks.begin(), out.blocks.end(),
            [](const FactorBlock& a, const FactorBlock& b) {
              return a.points.front() < b.points.front();
            });
  return out;
}

}  // namespace coarset
