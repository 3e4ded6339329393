#include "coarset/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "coarset/eigs.hpp"
#include "coarset/kernels.hpp"

namespace coarset {

TranslationOp Laplacian::op() const {
  if (!space) throw std::logic_error("Laplacian::op: no space attached");
  std::vector<SparseMatrix<cplx>::Triplet> trip;
  trip.reserve(matrix.nnz());
  for (const auto& t : matrix.entries())
    trip.push_back({t.row, t.col, cplx(static_cast<double>(t.value))});
  return TranslationOp(*space, SparseMatrix<cplx>(matrix.rows(), matrix.cols(), std::move(trip)));
}

Laplacian laplacian(const CoarseSpace& X, const ControlledSet& E) {
  if (E.universe() != X.num_points())
    throw std::invalid_argument("laplacian: controlled set universe does not match the space");
  if (!X.pairs_within_components(E))
    throw std::domain_error("laplacian: the controlled set must stay inside components");
  Laplacian L;
  L.space = &X;
  L.source = E;
  L.edges = E.symmetrized().off_diagonal();
  std::vector<long long> degree(X.num_points(), 0);
  std::vector<SparseMatrix<long long>::Triplet> trip;
  trip.reserve(L.edges.size() + X.num_points());
  for (const auto& [x, y] : L.edges.pairs()) {
    trip.push_back({x, y, -1});
    ++degree[x];
  }
  for (int x = 0; x < X.num_points(); ++x)
    if (degree[x] != 0) trip.push_back({x, x, degree[x]});
  L.matrix = SparseMatrix<long long>(X.num_points(), X.num_points(), std::move(trip));
  return L;
}

SparseMatrix<long long> elementary_laplacian(const PartialTranslation& t) {
  const SparseMatrix<long long> v = int_matrix(t);
  const SparseMatrix<long long> vs = v.adjoint();
  return subtract(add(kernels::matmul(v, vs), kernels::matmul(vs, v)), add(v, vs));
}

LaplacianSplit laplacian_sum_decomposition(const CoarseSpace& X, const ControlledSet& F,
                                           const ControlledSet& E) {
  LaplacianSplit out;
  out.total = laplacian(X, F);
  out.base = laplacian(X, E);
  const auto dec = elementary_decomposition(F, E);
  out.pieces = dec.pieces;
  out.piece_laplacians.reserve(dec.pieces.size());
  for (const auto& p : dec.pieces) out.piece_laplacians.push_back(elementary_laplacian(p));
  return out;
}

double zero_threshold(double lambda_max) { return 1e-8 * std::max(1.0, lambda_max); }

namespace {

constexpr double kNegativeFloor = -1e-9;

struct LocalMatrix {
  int size = 0;
  std::vector<SparseMatrix<double>::Triplet> trip;
};

std::vector<LocalMatrix> split_by_component(const Laplacian& L) {
  const CoarseSpace& X = *L.space;
  std::vector<LocalMatrix> local(X.num_components());
  for (int c = 0; c < X.num_components(); ++c) local[c].size = X.component_size(c);
  for (const auto& t : L.matrix.entries()) {
    const int c = X.component_of(t.row);
    const int off = X.component_offset(c);
    local[c].trip.push_back({t.row - off, t.col - off, static_cast<double>(t.value)});
  }
  return local;
}

ComponentSpectrum analyse_component(const LocalMatrix& lm, int component, int dense_cutoff,
                                    unsigned long long seed) {
  ComponentSpectrum cs;
  cs.component = component;
  cs.size = lm.size;
  const SparseMatrix<double> A(lm.size, lm.size, lm.trip);
  if (lm.size <= dense_cutoff) {
    auto dr = eigs::dense_spectrum(A, false);
    cs.eigenvalues = std::move(dr.eigenvalues);
    cs.complete = true;
  } else {
    const double inv = 1.0 / std::sqrt(static_cast<double>(lm.size));
    const std::vector<double> ones(lm.size, inv);
    auto lr = eigs::lanczos_extremes(A, {ones}, 3, 400, seed);
    if (!lr.converged)
      throw std::runtime_error("spectrum: iterative eigensolver did not converge on component " +
                               std::to_string(component));
    cs.eigenvalues.push_back(0.0);  // the deflated constant vector, exactly
    for (double v : lr.bottom) cs.eigenvalues.push_back(v);
    cs.eigenvalues.push_back(lr.top);
    std::sort(cs.eigenvalues.begin(), cs.eigenvalues.end());
    cs.complete = false;
  }
  for (double& v : cs.eigenvalues) {
    if (v < kNegativeFloor)
      throw std::logic_error("spectrum: negative eigenvalue " + std::to_string(v) +
                             " on a positive semidefinite matrix");
    if (v < 0.0) v = 0.0;
  }
  cs.lambda_max = cs.eigenvalues.empty() ? 0.0 : cs.eigenvalues.back();
  const double thr = zero_threshold(cs.lambda_max);
  for (double v : cs.eigenvalues) {
    if (v <= thr) {
      ++cs.kernel_dim;
    } else {
      cs.gap = v;
      break;
    }
  }
  return cs;
}

}  // namespace

SpectralReport spectrum(const Laplacian& L, int dense_cutoff, unsigned long long seed) {
  if (!L.space) throw std::logic_error("spectrum: no space attached");
  const auto local = split_by_component(L);
  SpectralReport rep;
  rep.components.resize(local.size());
  std::exception_ptr bad;
#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < static_cast<int>(local.size()); ++c) {
    try {
      rep.components[c] = analyse_component(local[c], c, dense_cutoff, seed + c);
    } catch (...) {
#pragma omp critical
      if (!bad) bad = std::current_exception();
    }
  }
  if (bad) std::rethrow_exception(bad);
  rep.min_gap = 0.0;
  bool first = true;
  for (const auto& cs : rep.components) {
    if (first || cs.gap < rep.min_gap) rep.min_gap = cs.gap;
    first = false;
  }
  return rep;
}

KernelCheck kernel_is_constants(const CoarseSpace& X, const ControlledSet& E, double tol) {
  if (E.universe() != X.num_points())
    throw std::invalid_argument("kernel_is_constants: universe mismatch");
  if (!X.pairs_within_components(E))
    throw std::domain_error("kernel_is_constants: the controlled set must stay inside components");

  // E generates when every pair of the space's generating set shows up in
  // some power of E ∪ E⁻¹ ∪ diag.  Those powers stabilise on "same
  // E-component", so the test reduces to connectivity of the E-graph.
  std::vector<int> parent(X.num_points());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& [x, y] : E.pairs()) parent[find(x)] = find(y);
  for (const auto& [x, y] : X.gen().pairs())
    if (find(x) != find(y))
      throw std::domain_error(
          "kernel_is_constants: E does not generate — the pair (" + std::to_string(x) + ", " +
          std::to_string(y) + ") of the space is never reached by powers of E");

  const Laplacian L = laplacian(X, E);
  const auto local = split_by_component(L);
  KernelCheck out;
  out.expected = X.num_components();
  for (int c = 0; c < X.num_components(); ++c) {
    const auto& lm = local[c];
    const SparseMatrix<double> A(lm.size, lm.size, lm.trip);
    auto dr = eigs::dense_spectrum(A, true);
    const double lmax = dr.eigenvalues.empty() ? 0.0 : dr.eigenvalues.back();
    const double thr = zero_threshold(lmax);
    for (int i = 0; i < lm.size && dr.eigenvalues[i] <= thr; ++i) {
      ++out.kernel_dim;
      const auto& v = dr.vectors[i];
      const double avg = std::accumulate(v.begin(), v.end(), 0.0) / lm.size;
      double dev = 0.0;
      for (double x : v) dev = std::max(dev, std::abs(x - avg));
      if (dev > out.max_deviation) {
        out.max_deviation = dev;
        out.witness.assign(X.num_points(), 0.0);
        for (int j = 0; j < lm.size; ++j) out.witness[X.component_offset(c) + j] = v[j];
      }
    }
  }
  out.ok = out.kernel_dim == out.expected && out.max_deviation <= tol;
  if (out.ok) out.witness.clear();
  return out;
}

ExpanderVerdict expander_verdict(const std::vector<CoarseSpace>& sequence, double c,
                                 int dense_cutoff, unsigned long long seed) {
  if (sequence.empty()) throw std::invalid_argument("expander_verdict: empty sequence");
  ExpanderVerdict out;
  for (const auto& X : sequence) {
    if (X.num_components() != 1)
      throw std::invalid_argument("expander_verdict: each member must have a single component");
    out.sizes.push_back(X.num_points());
    out.max_degrees.push_back(bounded_geometry_constant(X.gen().off_diagonal()));
    const auto rep = spectrum(laplacian(X, X.gen()), dense_cutoff, seed);
    out.gaps.push_back(rep.min_gap);
  }
  out.sizes_increasing = true;
  for (std::size_t i = 0; i + 1 < out.sizes.size(); ++i)
    if (out.sizes[i + 1] <= out.sizes[i]) out.sizes_increasing = false;
  out.max_degree = *std::max_element(out.max_degrees.begin(), out.max_degrees.end());
  out.min_gap = *std::min_element(out.gaps.begin(), out.gaps.end());
  out.gap_at_least_c = out.min_gap >= c;
  out.expander_evidence = out.sizes_increasing && out.degrees_bounded && out.gap_at_least_c;
  if (!out.sizes_increasing)
    out.failing = "sizes not strictly increasing";
  else if (!out.gap_at_least_c)
    out.failing = "spectral gap below the requested bound";
  return out;
}

CheegerEstimate cheeger(const CoarseSpace& X, int component, int dense_cutoff,
                        unsigned long long seed) {
  if (component < 0 || component >= X.num_components())
    throw std::invalid_argument("cheeger: component index out of range");
  const int s = X.component_size(component);
  const int off = X.component_offset(component);
  CheegerEstimate out;
  if (s == 1) {
    out.exact = true;
    return out;  // no admissible subset; report 0
  }
  if (s <= 24) {
    std::vector<std::uint32_t> nbr(s, 0);
    for (const auto& [i, j] : X.component_edges(component)) {
      nbr[i] |= (1u << j);
      nbr[j] |= (1u << i);
    }
    const auto cut = kernels::cheeger_scan(nbr);
    out.value = cut.value;
    out.exact = true;
    for (int i = 0; i < s; ++i)
      if (cut.subset & (1u << i)) out.subset.push_back(off + i);
    return out;
  }

  // Fiedler sweep: order by the second eigenvector, take the best prefix cut.
  std::vector<std::vector<int>> adj(s);
  for (const auto& [i, j] : X.component_edges(component)) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<SparseMatrix<double>::Triplet> trip;
  for (int i = 0; i < s; ++i) {
    trip.push_back({i, i, static_cast<double>(adj[i].size())});
    for (int j : adj[i]) trip.push_back({i, j, -1.0});
  }
  const SparseMatrix<double> A(s, s, std::move(trip));
  std::vector<double> fiedler;
  if (s <= dense_cutoff) {
    auto dr = eigs::dense_spectrum(A, true);
    fiedler = dr.vectors[1];
  } else {
    const double inv = 1.0 / std::sqrt(static_cast<double>(s));
    auto lr = eigs::lanczos_extremes(A, {std::vector<double>(s, inv)}, 1, 400, seed);
    if (!lr.converged || lr.bottom_vectors.empty())
      throw std::runtime_error("cheeger: iterative eigensolver did not converge");
    fiedler = lr.bottom_vectors[0];
  }
  std::vector<int> order(s);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return fiedler[a] != fiedler[b] ? fiedler[a] < fiedler[b] : a < b;
  });
  std::vector<char> in_set(s, 0);
  long long cut = 0;
  int best_k = -1;
  double best = 0.0;
  for (int k = 0; k < s - 1; ++k) {
    const int v = order[k];
    long long inside = 0;
    for (int u : adj[v]) inside += in_set[u];
    cut += static_cast<long long>(adj[v].size()) - 2 * inside;
    in_set[v] = 1;
    const int side = std::min(k + 1, s - (k + 1));
    const double value = static_cast<double>(cut) / side;
    if (best_k < 0 || value < best) {
      best = value;
      best_k = k;
    }
  }
  out.value = best;
  out.exact = false;
  const bool prefix_small = best_k + 1 <= s - (best_k + 1);
  for (int k = 0; k < s; ++k) {
    const bool in_prefix = k <= best_k;
    if (in_prefix == prefix_small) out.subset.push_back(off + order[k]);
  }
  std::sort(out.subset.begin(), out.subset.end());
  return out;
}

}  // namespace coarset
