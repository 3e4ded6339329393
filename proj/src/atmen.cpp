#include "coarset/atmen.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>

#include "coarset/kernels.hpp"

namespace coarset {

namespace {

constexpr double kPsdTol = 1e-9;

kernels::Graph local_graph(const CoarseSpace& X, int c) {
  std::vector<std::pair<int, int>> sym;
  sym.reserve(2 * X.component_edges(c).size());
  for (const auto& [i, j] : X.component_edges(c)) {
    sym.emplace_back(i, j);
    sym.emplace_back(j, i);
  }
  return kernels::graph_from_pairs(X.component_size(c), sym);
}

// Shortest cycle through `root` found by BFS: every non-tree edge (u, w)
// closes a walk of length dist[u] + dist[w] + 1, which always contains a
// cycle of at most that length; for a root on a shortest cycle the opposite
// edge realises the cycle length exactly.  Minimising over all roots is
// therefore exact.
int root_cycle_bound(const kernels::Graph& g, int root) {
  int best = INT_MAX;
  std::vector<int> dist(g.n, -1), parent(g.n, -1);
  std::queue<int> q;
  dist[root] = 0;
  q.push(root);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    if (best != INT_MAX && 2 * dist[u] >= best) break;  // no shorter candidate ahead
    for (int k = g.ptr[u]; k < g.ptr[u + 1]; ++k) {
      const int w = g.adj[k];
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        parent[w] = u;
        q.push(w);
      } else if (w != parent[u]) {
        best = std::min(best, dist[u] + dist[w] + 1);
      }
    }
  }
  return best;
}

void check_kernel_space(const Kernel& k, const CoarseSpace& X, const char* who) {
  if (k.space == nullptr || (k.space != &X && !(*k.space == X)))
    throw std::domain_error(std::string(who) + ": kernel is attached to a different space");
  if (static_cast<int>(k.values.size()) != X.num_components())
    throw std::domain_error(std::string(who) + ": kernel block count mismatch");
  for (int c = 0; c < X.num_components(); ++c) {
    const auto s = static_cast<std::size_t>(X.component_size(c));
    if (k.values[c].size() != s * s)
      throw std::domain_error(std::string(who) + ": kernel block size mismatch");
  }
}

// Hopcroft–Karp maximum matching on a bipartite graph with n vertices per
// side.  Deterministic: adjacency lists are scanned in their given order.
class BipartiteMatcher {
public:
  BipartiteMatcher(int n, const std::vector<std::vector<int>>& adj) : n_(n), adj_(adj) {}

  int solve(std::vector<int>& match_left, std::vector<int>& match_right) {
    ml_.assign(n_, -1);
    mr_.assign(n_, -1);
    int size = 0;
    for (int u = 0; u < n_; ++u)  // cheap greedy seed
      for (int v : adj_[u]) {
        if (mr_[v] < 0) {
          ml_[u] = v;
          mr_[v] = u;
          ++size;
          break;
        }
      }
    while (layer_bfs())
      for (int u = 0; u < n_; ++u)
        if (ml_[u] < 0 && augment(u)) ++size;
    match_left = ml_;
    match_right = mr_;
    return size;
  }

private:
  bool layer_bfs() {
    layer_.assign(n_, -1);
    std::queue<int> q;
    for (int u = 0; u < n_; ++u)
      if (ml_[u] < 0) {
        layer_[u] = 0;
        q.push(u);
      }
    bool free_reachable = false;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adj_[u]) {
        const int w = mr_[v];
        if (w < 0)
          free_reachable = true;
        else if (layer_[w] < 0) {
          layer_[w] = layer_[u] + 1;
          q.push(w);
        }
      }
    }
    return free_reachable;
  }

  bool augment(int u) {
    for (int v : adj_[u]) {
      const int w = mr_[v];
      if (w < 0 || (layer_[w] == layer_[u] + 1 && augment(w))) {
        ml_[u] = v;
        mr_[v] = u;
        return true;
      }
    }
    layer_[u] = -1;
    return false;
  }

  int n_;
  const std::vector<std::vector<int>>& adj_;
  std::vector<int> ml_, mr_, layer_;
};

}  // namespace

std::optional<int> girth(const CoarseSpace& X, int component) {
  if (component < 0 || component >= X.num_components())
    throw std::out_of_range("girth: component index out of range");
  const auto g = local_graph(X, component);
  int best = INT_MAX;
#pragma omp parallel for schedule(dynamic, 16) reduction(min : best)
  for (int root = 0; root < g.n; ++root) best = std::min(best, root_cycle_bound(g, root));
  if (best == INT_MAX) return std::nullopt;
  return best;
}

std::vector<std::optional<int>> girths(const CoarseSpace& X) {
  std::vector<std::optional<int>> out(X.num_components());
  for (int c = 0; c < X.num_components(); ++c) out[c] = girth(X, c);
  return out;
}

double Kernel::at(int component, int i, int j) const {
  const int s = space->component_size(component);
  return values[component][static_cast<std::size_t>(i) * s + j];
}

Kernel distance_kernel(const CoarseSpace& X) {
  Kernel k;
  k.space = &X;
  k.values.resize(X.num_components());
  for (int c = 0; c < X.num_components(); ++c) {
    const int s = X.component_size(c);
    const auto dist = kernels::all_pairs_distances(local_graph(X, c));
    auto& block = k.values[c];
    block.resize(static_cast<std::size_t>(s) * s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j)
        block[static_cast<std::size_t>(i) * s + j] = static_cast<double>(dist[i][j]);
  }
  return k;
}

Kernel truncated_distance_kernel(const CoarseSpace& X) {
  Kernel k = distance_kernel(X);
  for (int c = 0; c < X.num_components(); ++c) {
    const auto girth_c = girth(X, c);
    if (!girth_c) continue;  // forest: distances stay uncapped
    const double cap = *girth_c / 3.0;
    for (double& v : k.values[c]) v = std::min(v, cap);
  }
  return k;
}

Kernel embedding_kernel(const CoarseSpace& X, int dim, unsigned long long seed) {
  if (dim < 1) throw std::domain_error("embedding_kernel: dimension must be positive");
  std::mt19937_64 rng(seed);
  // Box–Muller on uniforms built from the top 53 bits keeps the stream
  // identical across standard library implementations.
  auto gaussian = [&rng]() {
    const double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  };
  std::vector<std::vector<double>> f(X.num_points(), std::vector<double>(dim));
  for (auto& row : f)
    for (double& v : row) v = gaussian();

  Kernel k;
  k.space = &X;
  k.values.resize(X.num_components());
  for (int c = 0; c < X.num_components(); ++c) {
    const int s = X.component_size(c);
    const int off = X.component_offset(c);
    auto& block = k.values[c];
    block.assign(static_cast<std::size_t>(s) * s, 0.0);
    for (int i = 0; i < s; ++i)
      for (int j = i + 1; j < s; ++j) {
        double sq = 0.0;
        for (int d = 0; d < dim; ++d) {
          const double diff = f[off + i][d] - f[off + j][d];
          sq += diff * diff;
        }
        block[static_cast<std::size_t>(i) * s + j] = sq;
        block[static_cast<std::size_t>(j) * s + i] = sq;
      }
  }
  return k;
}

Kernel explicit_kernel(const CoarseSpace& X, std::vector<std::vector<double>> values) {
  if (static_cast<int>(values.size()) != X.num_components())
    throw std::invalid_argument("explicit_kernel: one dense block per component required");
  for (int c = 0; c < X.num_components(); ++c) {
    const auto s = static_cast<std::size_t>(X.component_size(c));
    if (values[c].size() != s * s)
      throw std::invalid_argument("explicit_kernel: block " + std::to_string(c) +
                                  " is not size×size");
    for (double v : values[c])
      if (!std::isfinite(v))
        throw std::invalid_argument("explicit_kernel: non-finite entry in block " +
                                    std::to_string(c));
  }
  Kernel k;
  k.space = &X;
  k.values = std::move(values);
  return k;
}

NegativeTypeReport negative_type_check(const Kernel& k) {
  if (k.space == nullptr) throw std::domain_error("negative_type_check: kernel has no space");
  const CoarseSpace& X = *k.space;
  check_kernel_space(k, X, "negative_type_check");
  NegativeTypeReport rep;
  rep.symmetric = true;
  rep.zero_diagonal = true;
  rep.nonnegative = true;

  for (int c = 0; c < X.num_components(); ++c) {
    const int s = X.component_size(c);
    const auto& block = k.values[c];
    for (int i = 0; i < s; ++i) {
      if (block[static_cast<std::size_t>(i) * s + i] != 0.0) rep.zero_diagonal = false;
      for (int j = 0; j < s; ++j) {
        const double v = block[static_cast<std::size_t>(i) * s + j];
        if (v < 0.0) rep.nonnegative = false;
        if (v != block[static_cast<std::size_t>(j) * s + i]) rep.symmetric = false;
      }
    }
  }
  if (!rep.symmetric)
    rep.reason = "kernel is not symmetric";
  else if (!rep.zero_diagonal)
    rep.reason = "kernel diagonal is not identically zero";
  else if (!rep.nonnegative)
    rep.reason = "kernel has negative entries";

  // Negative type ⇔ the centred matrix −½·J k J is positive semi-definite
  // (J the projection complementary to constants).  Only meaningful for
  // symmetric kernels.
  rep.min_centred_eigenvalue = 0.0;
  if (rep.symmetric) {
    double min_eig = std::numeric_limits<double>::infinity();
    for (int c = 0; c < X.num_components(); ++c) {
      const int s = X.component_size(c);
      const auto& block = k.values[c];
      Eigen::MatrixXd K(s, s);
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) K(i, j) = block[static_cast<std::size_t>(i) * s + j];
      const Eigen::VectorXd rm = K.rowwise().mean();
      const double total = rm.mean();
      Eigen::MatrixXd M(s, s);
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) M(i, j) = -0.5 * (K(i, j) - rm(i) - rm(j) + total);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
      if (es.info() != Eigen::Success)
        throw std::runtime_error("negative_type_check: eigensolver failed");
      min_eig = std::min(min_eig, es.eigenvalues()(0));
    }
    rep.min_centred_eigenvalue = X.num_components() ? min_eig : 0.0;
    if (rep.reason.empty() && rep.min_centred_eigenvalue < -kPsdTol)
      rep.reason = "centred Gram matrix has a negative eigenvalue";
  }
  rep.ok = rep.reason.empty();

  // Growth profile: smallest kernel value over pairs at graph distance ≥ r+1.
  // Monotone in r by construction; how fast it climbs is the finite-scale
  // substitute for properness.
  int max_diam = 0;
  std::vector<std::vector<double>> min_at_dist(X.num_components());
  for (int c = 0; c < X.num_components(); ++c) {
    const int s = X.component_size(c);
    const auto dist = kernels::all_pairs_distances(local_graph(X, c));
    const auto& block = k.values[c];
    std::vector<double> at(1, 0.0);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) {
        const int d = dist[i][j];
        if (static_cast<int>(at.size()) <= d)
          at.resize(d + 1, std::numeric_limits<double>::infinity());
        at[d] = std::min(at[d], block[static_cast<std::size_t>(i) * s + j]);
      }
    max_diam = std::max(max_diam, static_cast<int>(at.size()) - 1);
    min_at_dist[c] = std::move(at);
  }
  rep.band_profile.assign(max_diam, std::numeric_limits<double>::infinity());
  for (const auto& at : min_at_dist)
    for (int d = static_cast<int>(at.size()) - 1; d >= 1; --d)
      for (int r = 1; r <= d; ++r) rep.band_profile[r - 1] = std::min(rep.band_profile[r - 1], at[d]);
  return rep;
}

SchoenbergResult schoenberg(const Kernel& k, double t) {
  if (!std::isfinite(t) || t < 0.0)
    throw std::domain_error("schoenberg: t must be a non-negative real");
  const auto rep = negative_type_check(k);
  if (!rep.ok) throw std::domain_error("schoenberg: kernel rejected: " + rep.reason);

  const CoarseSpace& X = *k.space;
  SchoenbergResult out;
  out.gram.resize(X.num_components());
  double min_eig = std::numeric_limits<double>::infinity();
  for (int c = 0; c < X.num_components(); ++c) {
    const int s = X.component_size(c);
    const auto& block = k.values[c];
    auto& gram = out.gram[c];
    gram.resize(block.size());
    Eigen::MatrixXd G(s, s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) {
        const double g = std::exp(-t * block[static_cast<std::size_t>(i) * s + j]);
        gram[static_cast<std::size_t>(i) * s + j] = g;
        G(i, j) = g;
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("schoenberg: eigensolver failed");
    min_eig = std::min(min_eig, es.eigenvalues()(0));
  }
  out.min_eigenvalue = X.num_components() ? min_eig : 0.0;
  out.psd = out.min_eigenvalue >= -kPsdTol;
  return out;
}

AnnulusMatching annulus_matching(const CoarseSpace& X, int component, int r) {
  if (component < 0 || component >= X.num_components())
    throw std::out_of_range("annulus_matching: component index out of range");
  if (r < 0) throw std::domain_error("annulus_matching: displacement floor must be >= 0");
  const int s = X.component_size(component);
  const auto dist = kernels::all_pairs_distances(local_graph(X, component));

  int diam = 0, ball = 0;
  for (int x = 0; x < s; ++x) {
    int count = 0;
    for (int y = 0; y < s; ++y) {
      diam = std::max(diam, dist[x][y]);
      if (dist[x][y] <= r) ++count;
    }
    ball = std::max(ball, count);
  }

  AnnulusMatching out;
  out.component = component;
  out.r = r;
  out.s_start = 3 * (ball + r);

  std::vector<std::vector<int>> adj(s);
  for (int send = out.s_start;; ++send) {
    for (int x = 0; x < s; ++x) {
      adj[x].clear();
      for (int y = 0; y < s; ++y)
        if (dist[x][y] > r && dist[x][y] <= send) adj[x].push_back(y);
    }
    std::vector<int> ml, mr;
    if (BipartiteMatcher(s, adj).solve(ml, mr) == s) {
      for (int x = 0; x < s; ++x)
        if (dist[x][ml[x]] <= r || dist[x][ml[x]] > send)
          throw std::logic_error("annulus_matching: matched pair left the band");
      out.s = send;
      out.sigma = std::move(ml);
      return out;
    }
    if (send >= diam)
      throw std::runtime_error(
          "annulus_matching: component " + std::to_string(component) +
          " admits no permutation displacing every point beyond " + std::to_string(r) +
          " (tried every band up to the diameter " + std::to_string(diam) +
          "); the component is too small for this floor");
  }
}

double witness_expectation(const CoarseSpace& X, int component, const Kernel& k, double t) {
  if (component < 0 || component >= X.num_components())
    throw std::out_of_range("witness_expectation: component index out of range");
  check_kernel_space(k, X, "witness_expectation");
  const int s = X.component_size(component);
  const auto& edges = X.component_edges(component);
  std::vector<int> deg(s, 0);
  for (const auto& [i, j] : edges) {
    ++deg[i];
    ++deg[j];
  }
  std::vector<double> per_vertex(s);
  for (int x = 0; x < s; ++x)
    per_vertex[x] = deg[x] * std::exp(-t * k.at(component, x, x));
  for (const auto& [i, j] : edges) {
    const double w = std::exp(-t * k.at(component, i, j));
    per_vertex[i] -= w;
    per_vertex[j] -= w;
  }
  return kernels::chunked_sum(per_vertex) / s;
}

Vector form_evaluate(const TranslationOp& S, const TranslationOp& T, const Kernel& k, double t) {
  if (!same_space(S, T)) throw std::domain_error("form_evaluate: operators on different spaces");
  const CoarseSpace& X = S.space();
  check_kernel_space(k, X, "form_evaluate");
  const auto cs = kernels::detail::to_csr(S.matrix());
  const auto ct = kernels::detail::to_csr(T.matrix());
  const int n = X.num_points();
  Vector out(n, cplx{});
#pragma omp parallel for schedule(static)
  for (int x = 0; x < n; ++x) {
    const int c = X.component_of(x);
    const int off = X.component_offset(c);
    cplx acc{};
    for (int ka = cs.ptr[x]; ka < cs.ptr[x + 1]; ++ka) {
      const cplx sv = std::conj(cs.val[ka]);
      const int y = cs.col[ka] - off;
      for (int kb = ct.ptr[x]; kb < ct.ptr[x + 1]; ++kb)
        acc += sv * ct.val[kb] * std::exp(-t * k.at(c, y, ct.col[kb] - off));
    }
    out[x] = acc;
  }
  return out;
}

}  // namespace coarset
