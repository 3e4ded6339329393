#include "coarset/boxspace.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace coarset {

namespace {

bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// Finishes a quotient from raw element encodings and the generator images:
/// sorts elements canonically, drops identity/duplicate generators, and
/// tabulates the right-multiplication action.
GroupQuotient assemble(std::vector<std::vector<int>> elements, std::vector<int> identity_encoding,
                       std::vector<std::vector<int>> gen_images,
                       const std::function<std::vector<int>(const std::vector<int>&,
                                                            const std::vector<int>&)>& mul,
                       std::string label) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());

  std::map<std::vector<int>, int> index;
  for (int i = 0; i < static_cast<int>(elements.size()); ++i) index[elements[i]] = i;

  std::sort(gen_images.begin(), gen_images.end());
  gen_images.erase(std::unique(gen_images.begin(), gen_images.end()), gen_images.end());
  std::erase(gen_images, identity_encoding);

  GroupQuotient q;
  q.size = static_cast<int>(elements.size());
  q.identity = index.at(identity_encoding);
  q.elements = std::move(elements);
  q.generators = gen_images;
  q.label = std::move(label);
  for (const auto& s : gen_images) {
    std::vector<int> table(q.size);
    for (int x = 0; x < q.size; ++x) table[x] = index.at(mul(q.elements[x], s));
    q.act.push_back(std::move(table));
  }
  return q;
}

}  // namespace

GroupQuotient cyclic_quotient(long long n) {
  if (n < 1) throw std::invalid_argument("cyclic_quotient: modulus must be positive");
  const int m = static_cast<int>(n);
  std::vector<std::vector<int>> elements;
  for (int i = 0; i < m; ++i) elements.push_back({i});
  auto mul = [m](const std::vector<int>& a, const std::vector<int>& b) {
    return std::vector<int>{(a[0] + b[0]) % m};
  };
  std::vector<std::vector<int>> gens = {{1 % m}, {(m - 1) % m}};
  return assemble(std::move(elements), {0}, std::move(gens), mul, "cyclic " + std::to_string(n));
}

GroupQuotient sl2_quotient(long long p) {
  if (!is_prime(p)) throw std::invalid_argument("sl2_quotient: modulus must be prime");
  const int m = static_cast<int>(p);
  auto mul = [m](const std::vector<int>& a, const std::vector<int>& b) {
    return std::vector<int>{(a[0] * b[0] + a[1] * b[2]) % m, (a[0] * b[1] + a[1] * b[3]) % m,
                            (a[2] * b[0] + a[3] * b[2]) % m, (a[2] * b[1] + a[3] * b[3]) % m};
  };
  const std::vector<int> id = {1, 0, 0, 1};
  const std::vector<std::vector<int>> gens = {
      {1, 1, 0, 1}, {1, (m - 1) % m, 0, 1}, {1, 0, 1, 1}, {1, 0, (m - 1) % m, 1}};

  std::set<std::vector<int>> seen = {id};
  std::vector<std::vector<int>> frontier = {id};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& g : frontier)
      for (const auto& s : gens) {
        auto h = mul(g, s);
        if (seen.insert(h).second) next.push_back(std::move(h));
      }
    frontier = std::move(next);
  }
  std::vector<std::vector<int>> elements(seen.begin(), seen.end());
  const long long expected = p * (p * p - 1);
  if (static_cast<long long>(elements.size()) != expected)
    throw std::logic_error("sl2_quotient: orbit closure found " +
                           std::to_string(elements.size()) + " elements, expected " +
                           std::to_string(expected));
  return assemble(std::move(elements), id, gens, mul, "sl2 " + std::to_string(p));
}

GroupQuotient permutation_quotient(const std::vector<std::vector<int>>& gens) {
  if (gens.empty()) throw std::invalid_argument("permutation_quotient: no generators");
  const int m = static_cast<int>(gens.front().size());
  std::vector<int> id(m);
  for (int i = 0; i < m; ++i) id[i] = i;

  std::set<std::vector<int>> gen_set;
  for (const auto& g : gens) {
    if (static_cast<int>(g.size()) != m)
      throw std::invalid_argument("permutation_quotient: generators act on different sets");
    std::vector<char> hit(m, 0);
    for (int v : g) {
      if (v < 0 || v >= m || hit[v])
        throw std::invalid_argument("permutation_quotient: not a permutation");
      hit[v] = 1;
    }
    if (g == id)
      throw std::invalid_argument("permutation_quotient: identity is not a valid generator");
    gen_set.insert(g);
  }
  for (const auto& g : gen_set) {
    std::vector<int> inv(m);
    for (int i = 0; i < m; ++i) inv[g[i]] = i;
    if (!gen_set.count(inv))
      throw std::invalid_argument(
          "permutation_quotient: generating set is not closed under inverses");
  }

  // (a·b)(i) = a(b(i)); right multiplication appends b before a acts.
  auto mul = [](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
    return c;
  };

  std::set<std::vector<int>> seen = {id};
  std::vector<std::vector<int>> frontier = {id};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& g : frontier)
      for (const auto& s : gen_set) {
        auto h = mul(g, s);
        if (seen.insert(h).second) next.push_back(std::move(h));
      }
    frontier = std::move(next);
  }
  std::vector<std::vector<int>> elements(seen.begin(), seen.end());
  std::vector<std::vector<int>> gen_list(gen_set.begin(), gen_set.end());
  return assemble(std::move(elements), id, std::move(gen_list), mul,
                  "permutation degree " + std::to_string(m));
}

CoarseSpace cayley_space(const GroupQuotient& q) {
  std::set<std::pair<int, int>> edges;
  for (const auto& table : q.act)
    for (int x = 0; x < q.size; ++x) {
      const int y = table[x];
      edges.insert({std::min(x, y), std::max(x, y)});
    }
  ComponentSpec spec;
  spec.size = q.size;
  spec.edges.assign(edges.begin(), edges.end());
  return CoarseSpace({std::move(spec)});
}

SparseMatrix<long long> group_laplacian_image(const GroupQuotient& q) {
  std::vector<SparseMatrix<long long>::Triplet> trip;
  for (const auto& table : q.act)
    for (int x = 0; x < q.size; ++x) {
      trip.push_back({x, x, 1});
      trip.push_back({x, table[x], -1});
    }
  return SparseMatrix<long long>(q.size, q.size, std::move(trip));
}

namespace {

BoxSpace assemble_box(std::vector<GroupQuotient> quotients, FamilyKind kind,
                      std::vector<long long> parameters) {
  std::vector<CoarseSpace> parts;
  for (const auto& q : quotients) parts.push_back(cayley_space(q));
  BoxSpace out{disjoint_union(parts), std::move(quotients), kind, std::move(parameters)};
  return out;
}

}  // namespace

BoxSpace box_space_cyclic(const std::vector<long long>& tower) {
  if (tower.empty()) throw std::invalid_argument("box_space_cyclic: empty tower");
  for (std::size_t i = 0; i + 1 < tower.size(); ++i)
    if (tower[i] <= 0 || tower[i + 1] % tower[i] != 0)
      throw std::invalid_argument(
          "box_space_cyclic: tower is not nested — each modulus must divide the next");
  std::vector<GroupQuotient> qs;
  for (long long n : tower) qs.push_back(cyclic_quotient(n));
  return assemble_box(std::move(qs), FamilyKind::cyclic_tower, tower);
}

BoxSpace box_space_sl2(const std::vector<long long>& primes) {
  if (primes.empty()) throw std::invalid_argument("box_space_sl2: empty prime list");
  for (std::size_t i = 0; i + 1 < primes.size(); ++i)
    if (primes[i + 1] <= primes[i])
      throw std::invalid_argument("box_space_sl2: primes must be listed in increasing order");
  std::vector<GroupQuotient> qs;
  for (long long p : primes) qs.push_back(sl2_quotient(p));
  return assemble_box(std::move(qs), FamilyKind::sl2_mod_p, primes);
}

}  // namespace coarset
