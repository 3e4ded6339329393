#include "coarset/kernels.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <stdexcept>

namespace coarset::kernels {

Graph graph_from_space(const CoarseSpace& X) {
  std::vector<std::pair<int, int>> sym;
  for (const auto& [x, y] : X.gen().pairs())
    if (x != y) sym.emplace_back(x, y);
  return graph_from_pairs(X.num_points(), sym);
}

Graph graph_from_pairs(int n, const std::vector<std::pair<int, int>>& sym_pairs) {
  Graph g;
  g.n = n;
  g.ptr.assign(n + 1, 0);
  for (const auto& [x, y] : sym_pairs) {
    (void)y;
    ++g.ptr[x + 1];
  }
  for (int i = 0; i < n; ++i) g.ptr[i + 1] += g.ptr[i];
  g.adj.resize(sym_pairs.size());
  std::vector<int> fill(g.ptr.begin(), g.ptr.end() - 1);
  for (const auto& [x, y] : sym_pairs) g.adj[fill[x]++] = y;
  for (int i = 0; i < n; ++i) std::sort(g.adj.begin() + g.ptr[i], g.adj.begin() + g.ptr[i + 1]);
  return g;
}

void bfs_distances(const Graph& g, int source, std::vector<int>& dist) {
  dist.assign(g.n, -1);
  std::deque<int> q{source};
  dist[source] = 0;
  while (!q.empty()) {
    const int v = q.front();
    q.pop_front();
    for (int k = g.ptr[v]; k < g.ptr[v + 1]; ++k) {
      const int w = g.adj[k];
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push_back(w);
      }
    }
  }
}

std::vector<std::vector<int>> all_pairs_distances_serial(const Graph& g) {
  std::vector<std::vector<int>> out(g.n);
  for (int s = 0; s < g.n; ++s) bfs_distances(g, s, out[s]);
  return out;
}

std::vector<std::vector<int>> all_pairs_distances(const Graph& g) {
  std::vector<std::vector<int>> out(g.n);
#pragma omp parallel for schedule(static)
  for (int s = 0; s < g.n; ++s) bfs_distances(g, s, out[s]);
  return out;
}

namespace {
constexpr std::size_t kChunk = 1024;

double sum_chunk(const std::vector<double>& v, std::size_t begin, std::size_t end) {
  double acc = 0.0;
  for (std::size_t i = begin; i < end; ++i) acc += v[i];
  return acc;
}
}  // namespace

double chunked_sum_serial(const std::vector<double>& values) {
  const std::size_t chunks = (values.size() + kChunk - 1) / kChunk;
  double acc = 0.0;
  for (std::size_t c = 0; c < chunks; ++c)
    acc += sum_chunk(values, c * kChunk, std::min(values.size(), (c + 1) * kChunk));
  return acc;
}

double chunked_sum(const std::vector<double>& values) {
  const std::size_t chunks = (values.size() + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < static_cast<long long>(chunks); ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    partial[c] = sum_chunk(values, begin, std::min(values.size(), begin + kChunk));
  }
  double acc = 0.0;
  for (double p : partial) acc += p;
  return acc;
}

namespace {

// (cut1/size1) < (cut2/size2) with exact cross-multiplication; ties prefer
// the smaller cut, then the smaller subset, then the smaller mask.
bool better(const CheegerCut& a, const CheegerCut& b) {
  const long long lhs = a.cut * b.size, rhs = b.cut * a.size;
  if (lhs != rhs) return lhs < rhs;
  if (a.cut != b.cut) return a.cut < b.cut;
  if (a.size != b.size) return a.size < b.size;
  return a.subset < b.subset;
}

CheegerCut scan_range(const std::vector<std::uint32_t>& nbr, std::uint32_t lo, std::uint64_t hi,
                      int half) {
  CheegerCut best{0, -1, 0, 0.0};
  for (std::uint64_t m = lo; m < hi; ++m) {
    const auto mask = static_cast<std::uint32_t>(m);
    const int size = std::popcount(mask);
    if (size == 0 || size > half) continue;
    long long cut = 0;
    std::uint32_t rest = mask;
    while (rest) {
      const int v = std::countr_zero(rest);
      rest &= rest - 1;
      cut += std::popcount(nbr[v] & ~mask);
    }
    CheegerCut cand{mask, cut, size, 0.0};
    if (best.cut < 0 || better(cand, best)) best = cand;
  }
  return best;
}

}  // namespace

CheegerCut cheeger_scan_serial(const std::vector<std::uint32_t>& nbr) {
  const int n = static_cast<int>(nbr.size());
  if (n < 2 || n > 24) throw std::invalid_argument("cheeger_scan: need 2..24 vertices");
  CheegerCut best = scan_range(nbr, 1, std::uint64_t{1} << n, n / 2);
  best.value = static_cast<double>(best.cut) / best.size;
  return best;
}

CheegerCut cheeger_scan(const std::vector<std::uint32_t>& nbr) {
  const int n = static_cast<int>(nbr.size());
  if (n < 2 || n > 24) throw std::invalid_argument("cheeger_scan: need 2..24 vertices");
  const std::uint64_t total = std::uint64_t{1} << n;
  const std::uint64_t stride = std::max<std::uint64_t>(std::uint64_t{1} << 16, total / 256);
  const int pieces = static_cast<int>((total + stride - 1) / stride);
  std::vector<CheegerCut> partial(pieces);
#pragma omp parallel for schedule(static)
  for (int p = 0; p < pieces; ++p)
    partial[p] = scan_range(nbr, static_cast<std::uint32_t>(p * stride),
                            std::min(total, (p + 1) * stride), n / 2);
  CheegerCut best{0, -1, 0, 0.0};
  for (const auto& cand : partial)
    if (cand.cut >= 0 && (best.cut < 0 || better(cand, best))) best = cand;
  best.value = static_cast<double>(best.cut) / best.size;
  return best;
}

}  // namespace coarset::kernels
