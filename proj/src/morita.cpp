#include "coarset/morita.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "coarset/eigs.hpp"
#include "coarset/spectral.hpp"

namespace coarset {

namespace {
constexpr int kBlockCap = 64;
constexpr double kBlockConstancyTol = 1e-10;
}  // namespace

DensePartition::DensePartition(const CoarseSpace& X, std::vector<std::vector<int>> blocks,
                               std::vector<int> markers)
    : space_(&X), y_space_(std::vector<ComponentSpec>{ComponentSpec{1, {}}}) {
  if (blocks.size() != markers.size())
    throw std::invalid_argument("DensePartition: one marker per block required");
  if (blocks.empty()) throw std::invalid_argument("DensePartition: no blocks");

  std::vector<int> order(blocks.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return markers[a] < markers[b]; });
  for (int b : order) {
    std::sort(blocks[b].begin(), blocks[b].end());
    blocks_.push_back(std::move(blocks[b]));
    markers_.push_back(markers[b]);
  }
  for (std::size_t i = 0; i + 1 < markers_.size(); ++i)
    if (markers_[i] == markers_[i + 1])
      throw std::invalid_argument("DensePartition: duplicate marker point");

  block_of_.assign(X.num_points(), -1);
  for (int b = 0; b < num_blocks(); ++b) {
    const auto& blk = blocks_[b];
    if (blk.empty()) throw std::invalid_argument("DensePartition: empty block");
    if (static_cast<int>(blk.size()) > kBlockCap)
      throw std::domain_error("DensePartition: a block exceeds the size cap of 64 points");
    if (!std::binary_search(blk.begin(), blk.end(), markers_[b]))
      throw std::invalid_argument("DensePartition: marker lies outside its block");
    const int comp = X.component_of(blk.front());
    for (int x : blk) {
      if (x < 0 || x >= X.num_points())
        throw std::invalid_argument("DensePartition: point id out of range");
      if (X.component_of(x) != comp)
        throw std::invalid_argument("DensePartition: a block straddles two components");
      if (block_of_[x] != -1)
        throw std::invalid_argument("DensePartition: blocks overlap at point " +
                                    std::to_string(x));
      block_of_[x] = b;
    }
  }
  for (int x = 0; x < X.num_points(); ++x)
    if (block_of_[x] == -1)
      throw std::invalid_argument("DensePartition: point " + std::to_string(x) +
                                  " is covered by no block");

  // The markers inherit a quotient graph: two blocks are adjacent when some
  // generating pair joins them.  Connectivity survives the quotient.
  const int nc = X.num_components();
  std::vector<int> first_block(nc, -1), count(nc, 0);
  for (int b = 0; b < num_blocks(); ++b) {
    const int c = X.component_of(markers_[b]);
    if (first_block[c] == -1) first_block[c] = b;
    ++count[c];
  }
  std::vector<std::set<std::pair<int, int>>> edges(nc);
  const ControlledSet off_pairs = X.gen().off_diagonal();  // named: the loop holds a reference
  for (const auto& [x, z] : off_pairs.pairs()) {
    const int b1 = block_of_[x], b2 = block_of_[z];
    if (b1 == b2) continue;
    const int c = X.component_of(x);
    const int l1 = b1 - first_block[c], l2 = b2 - first_block[c];
    edges[c].insert({std::min(l1, l2), std::max(l1, l2)});
  }
  std::vector<ComponentSpec> specs;
  for (int c = 0; c < nc; ++c) {
    ComponentSpec spec;
    spec.size = count[c];
    spec.edges.assign(edges[c].begin(), edges[c].end());
    specs.push_back(std::move(spec));
  }
  y_space_ = CoarseSpace(std::move(specs));
}

int DensePartition::max_block_size() const {
  int m = 0;
  for (const auto& b : blocks_) m = std::max<int>(m, b.size());
  return m;
}

int DensePartition::min_block_size() const {
  int m = kBlockCap + 1;
  for (const auto& b : blocks_) m = std::min<int>(m, b.size());
  return m;
}

DensePartition build_partition(const CoarseSpace& X, const std::vector<int>& Y, int radius) {
  if (radius < 0) throw std::invalid_argument("build_partition: negative radius");
  if (Y.empty() && X.num_points() > 0)
    throw std::invalid_argument("build_partition: no marked points for a non-empty space");
  std::vector<int> marks(Y);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  for (int y : marks)
    if (y < 0 || y >= X.num_points())
      throw std::invalid_argument("build_partition: marker id out of range");

  std::vector<std::vector<int>> adj(X.num_points());
  const ControlledSet off_pairs = X.gen().off_diagonal();  // named: the loop holds a reference
  for (const auto& [x, z] : off_pairs.pairs()) adj[x].push_back(z);

  std::vector<int> dist(X.num_points(), -1), label(X.num_points(), -1);
  std::vector<int> frontier;
  for (int y : marks) {
    dist[y] = 0;
    label[y] = y;
    frontier.push_back(y);
  }
  for (int level = 0; level < radius && !frontier.empty(); ++level) {
    std::vector<int> next;
    for (int x : frontier) {
      for (int w : adj[x]) {
        if (dist[w] != -1) continue;
        if (label[w] == -1 || label[x] < label[w]) {
          if (label[w] == -1) next.push_back(w);
          label[w] = label[x];
        }
      }
    }
    for (int w : next) dist[w] = level + 1;
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }

  std::vector<int> orphans;
  for (int x = 0; x < X.num_points(); ++x)
    if (dist[x] == -1) orphans.push_back(x);
  if (!orphans.empty()) {
    std::string msg = "build_partition: points beyond radius " + std::to_string(radius) +
                      " of every marker:";
    for (int x : orphans) msg += " " + std::to_string(x);
    throw std::domain_error(msg);
  }

  std::map<int, std::vector<int>> by_label;
  for (int x = 0; x < X.num_points(); ++x) by_label[label[x]].push_back(x);
  std::vector<std::vector<int>> blocks;
  std::vector<int> markers;
  for (auto& [y, blk] : by_label) {
    markers.push_back(y);
    blocks.push_back(std::move(blk));
  }
  return DensePartition(X, std::move(blocks), std::move(markers));
}

DensePartition partition_from_blocks(
    const CoarseSpace& X, const std::vector<std::pair<int, std::vector<int>>>& assoc) {
  std::vector<std::vector<int>> blocks;
  std::vector<int> markers;
  for (const auto& [y, blk] : assoc) {
    markers.push_back(y);
    blocks.push_back(blk);
  }
  return DensePartition(X, std::move(blocks), std::move(markers));
}

TranslationOp averaging_op(const DensePartition& P) {
  std::vector<SparseMatrix<cplx>::Triplet> trip;
  for (int b = 0; b < P.num_blocks(); ++b) {
    const auto& blk = P.block(b);
    const double inv = 1.0 / static_cast<double>(blk.size());
    for (int x : blk)
      for (int z : blk) trip.push_back({x, z, cplx(inv)});
  }
  const int n = P.space().num_points();
  return TranslationOp(P.space(), SparseMatrix<cplx>(n, n, std::move(trip)));
}

TranslationOp weight_op(const DensePartition& P) {
  Vector d(P.space().num_points());
  for (int x = 0; x < P.space().num_points(); ++x)
    d[x] = std::sqrt(static_cast<double>(P.n_of(x)));
  return diagonal_op(P.space(), d);
}

TranslationOp weight_inv_op(const DensePartition& P) {
  Vector d(P.space().num_points());
  for (int x = 0; x < P.space().num_points(); ++x)
    d[x] = 1.0 / std::sqrt(static_cast<double>(P.n_of(x)));
  return diagonal_op(P.space(), d);
}

namespace {

void require_partition_space(const TranslationOp& T, const DensePartition& P, const char* who) {
  if (&T.space() != &P.space() && !(T.space() == P.space()))
    throw std::domain_error(std::string(who) + ": operator space does not match the partition");
}

double inv_sqrt_n(const DensePartition& P, int x) {
  return 1.0 / std::sqrt(static_cast<double>(P.n_of(x)));
}

}  // namespace

TranslationOp alpha(const TranslationOp& T, const DensePartition& P) {
  require_partition_space(T, P, "alpha");
  const TranslationOp A = averaging_op(P);
  const double dev = sup_deviation(matmul(matmul(A, T), A), T);
  if (dev > kBlockConstancyTol)
    throw std::domain_error("alpha: operator is not block-constant; ATA deviates by " +
                            std::to_string(dev));
  std::map<std::pair<int, int>, cplx> acc;
  for (const auto& t : T.matrix().entries())
    acc[{P.block_of(t.row), P.block_of(t.col)}] += t.value;
  std::vector<SparseMatrix<cplx>::Triplet> trip;
  for (const auto& [key, sum] : acc) {
    const double s1 = 1.0 / std::sqrt(static_cast<double>(P.block_size(key.first)));
    const double s2 = 1.0 / std::sqrt(static_cast<double>(P.block_size(key.second)));
    trip.push_back({key.first, key.second, s1 * s2 * sum});
  }
  const int m = P.num_blocks();
  return TranslationOp(P.marker_space(), SparseMatrix<cplx>(m, m, std::move(trip)));
}

TranslationOp beta(const TranslationOp& S, const DensePartition& P) {
  if (&S.space() != &P.marker_space() && !(S.space() == P.marker_space()))
    throw std::domain_error("beta: operator must live over the marker space");
  std::vector<SparseMatrix<cplx>::Triplet> trip;
  for (const auto& t : S.matrix().entries())
    for (int x : P.block(t.row))
      for (int z : P.block(t.col))
        trip.push_back({x, z, inv_sqrt_n(P, x) * inv_sqrt_n(P, z) * t.value});
  const int n = P.space().num_points();
  return TranslationOp(P.space(), SparseMatrix<cplx>(n, n, std::move(trip)));
}

TranslationOp psi_y(const TranslationOp& T, const DensePartition& P) {
  return beta(phi(alpha(T, P)), P);
}

TranslationOp psi_y_explicit(const TranslationOp& T, const DensePartition& P) {
  require_partition_space(T, P, "psi_y_explicit");
  std::vector<cplx> rowacc(P.num_blocks(), cplx(0.0));
  for (const auto& t : T.matrix().entries())
    rowacc[P.block_of(t.row)] += inv_sqrt_n(P, t.col) * t.value;
  std::vector<SparseMatrix<cplx>::Triplet> trip;
  for (int b = 0; b < P.num_blocks(); ++b) {
    if (rowacc[b] == cplx(0.0)) continue;
    const double n = static_cast<double>(P.block_size(b));
    const cplx val = std::pow(n, -1.5) * rowacc[b];
    for (int x : P.block(b))
      for (int z : P.block(b)) trip.push_back({x, z, val});
  }
  const int n = P.space().num_points();
  return TranslationOp(P.space(), SparseMatrix<cplx>(n, n, std::move(trip)));
}

std::vector<PartialTranslation> smallsupp_split(const PartialTranslation& v,
                                                const DensePartition& P) {
  if (v.universe() != P.space().num_points())
    throw std::invalid_argument("smallsupp_split: universe mismatch");
  struct Piece {
    std::vector<PartialTranslation::Entry> entries;
    std::set<int> range_blocks, domain_blocks;
  };
  std::vector<Piece> pieces;
  for (const auto& e : v.mapping()) {
    const int db = P.block_of(e.first), rb = P.block_of(e.second);
    bool placed = false;
    for (auto& p : pieces) {
      if (p.range_blocks.count(rb) || p.domain_blocks.count(db)) continue;
      p.entries.push_back(e);
      p.range_blocks.insert(rb);
      p.domain_blocks.insert(db);
      placed = true;
      break;
    }
    if (!placed) {
      pieces.push_back({{e}, {rb}, {db}});
    }
  }
  std::vector<PartialTranslation> out;
  for (auto& p : pieces) out.emplace_back(v.universe(), std::move(p.entries));
  return out;
}

CadFactors cad_factors(const TranslationOp& T, const DensePartition& P) {
  require_partition_space(T, P, "cad_factors");
  std::vector<char> row_nonzero(P.space().num_points(), 0);
  for (const auto& t : T.matrix().entries()) row_nonzero[t.row] = 1;
  std::vector<int> per_block(P.num_blocks(), 0);
  for (int x = 0; x < P.space().num_points(); ++x)
    if (row_nonzero[x]) ++per_block[P.block_of(x)];
  for (int b = 0; b < P.num_blocks(); ++b)
    if (per_block[b] > 1)
      throw std::invalid_argument(
          "cad_factors: a block meets the row support in more than one point");

  std::vector<SparseMatrix<cplx>::Triplet> ctrip, dtrip;
  for (int x = 0; x < P.space().num_points(); ++x)
    if (row_nonzero[x])
      for (int z : P.block(P.block_of(x))) ctrip.push_back({x, z, cplx(1.0)});
  for (const auto& t : T.matrix().entries()) {
    const auto& blk = P.block(P.block_of(t.row));
    const double inv = 1.0 / static_cast<double>(blk.size());
    for (int w : blk) dtrip.push_back({w, t.col, inv * t.value});
  }
  const int n = P.space().num_points();
  return {TranslationOp(P.space(), SparseMatrix<cplx>(n, n, std::move(ctrip))),
          TranslationOp(P.space(), SparseMatrix<cplx>(n, n, std::move(dtrip)))};
}

std::vector<CadFactors> cad_decomposition(const TranslationOp& T, const DensePartition& P) {
  require_partition_space(T, P, "cad_decomposition");
  // Rank of a point inside its block; the rank-k points form a transversal,
  // so grouping rows by rank meets every block at most once.
  std::vector<int> rank(P.space().num_points(), 0);
  for (int b = 0; b < P.num_blocks(); ++b) {
    const auto& blk = P.block(b);
    for (std::size_t i = 0; i < blk.size(); ++i) rank[blk[i]] = static_cast<int>(i);
  }
  std::vector<std::vector<SparseMatrix<cplx>::Triplet>> groups(P.max_block_size());
  for (const auto& t : T.matrix().entries()) groups[rank[t.row]].push_back(t);
  std::vector<CadFactors> out;
  const int n = P.space().num_points();
  for (auto& g : groups) {
    if (g.empty()) continue;
    out.push_back(cad_factors(TranslationOp(P.space(), SparseMatrix<cplx>(n, n, std::move(g))), P));
  }
  return out;
}

TranslationOp collapse_op(const PartialTranslation& v, const DensePartition& P) {
  if (v.universe() != P.space().num_points())
    throw std::invalid_argument("collapse_op: universe mismatch");
  std::vector<SparseMatrix<cplx>::Triplet> trip;
  for (int x : v.range())
    for (int z : P.block(P.block_of(x))) trip.push_back({x, z, cplx(1.0)});
  const int n = P.space().num_points();
  return TranslationOp(P.space(), SparseMatrix<cplx>(n, n, std::move(trip)));
}

// ---------------------------------------------------------------------------
// identity suite
// ---------------------------------------------------------------------------

namespace {

// Portable deterministic sampling: raw mt19937_64 words reduced by modulo.
int rand_below(std::mt19937_64& rng, int n) { return static_cast<int>(rng() % n); }

std::vector<int> shuffled(std::vector<int> v, std::mt19937_64& rng) {
  for (int i = static_cast<int>(v.size()) - 1; i > 0; --i)
    std::swap(v[i], v[rand_below(rng, i + 1)]);
  return v;
}

PartialTranslation random_translation(const CoarseSpace& X, std::mt19937_64& rng) {
  std::vector<PartialTranslation::Entry> ent;
  for (int c = 0; c < X.num_components(); ++c) {
    std::vector<int> pts(X.component_size(c));
    std::iota(pts.begin(), pts.end(), X.component_offset(c));
    const auto src = shuffled(pts, rng);
    const auto tgt = shuffled(pts, rng);
    const int k = rand_below(rng, static_cast<int>(pts.size()) + 1);
    for (int i = 0; i < k; ++i) ent.push_back({src[i], tgt[i]});
  }
  return PartialTranslation(X.num_points(), std::move(ent));
}

TranslationOp random_within_components(const CoarseSpace& X, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<SparseMatrix<cplx>::Triplet> trip;
  for (int c = 0; c < X.num_components(); ++c) {
    const int off = X.component_offset(c), s = X.component_size(c);
    const int k = rand_below(rng, 2 * s + 1) + 1;
    for (int i = 0; i < k; ++i) {
      const int x = off + rand_below(rng, s), z = off + rand_below(rng, s);
      trip.push_back({x, z, cplx(coef(rng), coef(rng))});
    }
  }
  return TranslationOp(X, SparseMatrix<cplx>(X.num_points(), X.num_points(), std::move(trip)));
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double nrm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Distance from v to the span of an orthonormal family.
double residual_norm(std::vector<double> v, const std::vector<std::vector<double>>& basis) {
  for (int sweep = 0; sweep < 2; ++sweep)
    for (const auto& b : basis) {
      const double c = dot(b, v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
  return nrm2(v);
}

std::vector<double> project_out(std::vector<double> v,
                                const std::vector<std::vector<double>>& basis) {
  for (int sweep = 0; sweep < 2; ++sweep)
    for (const auto& b : basis) {
      const double c = dot(b, v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
  return v;
}

std::vector<double> block_average(const DensePartition& P, const std::vector<double>& v) {
  std::vector<double> out(v.size(), 0.0);
  for (int b = 0; b < P.num_blocks(); ++b) {
    double s = 0.0;
    for (int x : P.block(b)) s += v[x];
    s /= static_cast<double>(P.block_size(b));
    for (int x : P.block(b)) out[x] = s;
  }
  return out;
}

std::vector<std::vector<double>> component_constant_basis(const CoarseSpace& X) {
  std::vector<std::vector<double>> basis;
  for (int c = 0; c < X.num_components(); ++c) {
    std::vector<double> v(X.num_points(), 0.0);
    const double inv = 1.0 / std::sqrt(static_cast<double>(X.component_size(c)));
    for (int i = 0; i < X.component_size(c); ++i) v[X.component_offset(c) + i] = inv;
    basis.push_back(std::move(v));
  }
  return basis;
}

// Orthonormal basis of the block-constant vectors that correspond, under the
// weight identification, to component constants over the markers.
std::vector<std::vector<double>> marker_constant_basis(const DensePartition& P) {
  const CoarseSpace& X = P.space();
  std::vector<std::vector<double>> basis;
  for (int c = 0; c < X.num_components(); ++c) {
    std::vector<double> v(X.num_points(), 0.0);
    for (int i = 0; i < X.component_size(c); ++i) {
      const int x = X.component_offset(c) + i;
      v[x] = 1.0 / std::sqrt(static_cast<double>(P.n_of(x)));
    }
    const double nv = nrm2(v);
    for (double& t : v) t /= nv;
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<std::vector<double>> kernel_basis(const SparseMatrix<long long>& M) {
  std::vector<SparseMatrix<double>::Triplet> trip;
  for (const auto& t : M.entries())
    trip.push_back({t.row, t.col, static_cast<double>(t.value)});
  auto dr = eigs::dense_spectrum(SparseMatrix<double>(M.rows(), M.cols(), std::move(trip)), true);
  const double lmax = dr.eigenvalues.empty() ? 0.0 : dr.eigenvalues.back();
  const double thr = zero_threshold(lmax);
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < dr.eigenvalues.size() && dr.eigenvalues[i] <= thr; ++i)
    out.push_back(dr.vectors[i]);
  return out;
}

}  // namespace

IdentityReport identity_suite(const DensePartition& P, unsigned long long seed, int trials) {
  if (trials < 1) throw std::invalid_argument("identity_suite: need at least one trial");
  std::mt19937_64 rng(seed);
  const CoarseSpace& X = P.space();
  const CoarseSpace& Y = P.marker_space();
  const int n = X.num_points();

  const TranslationOp A = averaging_op(P);
  const TranslationOp N = weight_op(P);
  const TranslationOp Ninv = weight_inv_op(P);
  const TranslationOp I = identity_op(X);
  const TranslationOp IY = identity_op(Y);

  IdentityReport rep;
  rep.weight_norm = std::sqrt(static_cast<double>(P.max_block_size()));
  rep.weight_inv_norm = 1.0 / std::sqrt(static_cast<double>(P.min_block_size()));
  auto row = [&rep](const std::string& name, double dev, double tol) {
    rep.rows.push_back({name, dev, tol, dev <= tol});
  };

  row("averaging-idempotent", sup_deviation(matmul(A, A), A), 1e-12);
  row("averaging-selfadjoint", sup_deviation(adjoint(A), A), 1e-12);
  row("averaging-commutes-with-weight", sup_deviation(matmul(A, N), matmul(N, A)), 0.0);
  row("averaging-row-sums-one", sup_deviation(phi(A), I), 1e-12);

  {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double dev = 0.0;
    for (int t = 0; t < trials; ++t) {
      std::vector<double> z(n);
      for (double& v : z) v = coef(rng);
      const auto az = block_average(P, z);
      Vector zc(n);
      for (int i = 0; i < n; ++i) zc[i] = z[i];
      const Vector image = coarset::apply(A, zc);
      for (int i = 0; i < n; ++i) dev = std::max(dev, std::abs(image[i] - az[i]));
    }
    row("averaging-range-block-constant", dev, 1e-12);
  }

  row("compress-averaging-to-identity", sup_deviation(alpha(A, P), IY), 1e-10);

  double rt1 = 0.0, rt2 = 0.0, adj_dev = 0.0, mult_dev = 0.0, psi_dev = 0.0;
  for (int t = 0; t < trials; ++t) {
    const TranslationOp T0 = random_within_components(X, rng);
    const TranslationOp T = matmul(matmul(A, T0), A);
    rt1 = std::max(rt1, sup_deviation(beta(alpha(T, P), P), T));
    adj_dev = std::max(adj_dev, sup_deviation(alpha(adjoint(T), P), adjoint(alpha(T, P))));
    mult_dev = std::max(
        mult_dev, sup_deviation(alpha(matmul(adjoint(T), T), P),
                                matmul(adjoint(alpha(T, P)), alpha(T, P))));
    psi_dev = std::max(psi_dev, sup_deviation(psi_y(T, P), psi_y_explicit(T, P)));

    const TranslationOp S = random_within_components(Y, rng);
    rt2 = std::max(rt2, sup_deviation(alpha(beta(S, P), P), S));
  }
  row("compress-expand-roundtrip", rt1, 1e-10);
  row("expand-compress-roundtrip", rt2, 1e-10);
  row("compress-respects-adjoint", adj_dev, 1e-10);
  row("compress-multiplicative", mult_dev, 1e-10);
  row("compressed-row-sum-explicit-formula", psi_dev, 1e-10);

  // Transport identity over the markers, with its entrywise closed form.
  {
    double dev = 0.0, closed = 0.0;
    for (int t = 0; t < trials; ++t) {
      const PartialTranslation v = random_translation(Y, rng);
      const TranslationOp vo = from_partial_translation(Y, v);
      const TranslationOp lhs = matmul(phi(matmul(matmul(N, beta(vo, P)), Ninv)), A);
      const TranslationOp rhs = matmul(beta(matmul(vo, adjoint(vo)), P), A);
      dev = std::max(dev, sup_deviation(lhs, rhs));

      std::vector<char> marker_hit(P.num_blocks(), 0);
      for (int b : v.range()) marker_hit[b] = 1;
      std::vector<SparseMatrix<cplx>::Triplet> trip;
      for (int b = 0; b < P.num_blocks(); ++b) {
        if (!marker_hit[b]) continue;
        const double inv = 1.0 / static_cast<double>(P.block_size(b));
        for (int x : P.block(b))
          for (int z : P.block(b)) trip.push_back({x, z, cplx(inv)});
      }
      const TranslationOp oracle(X, SparseMatrix<cplx>(n, n, std::move(trip)));
      closed = std::max(closed, sup_deviation(lhs, oracle));
      closed = std::max(closed, sup_deviation(rhs, oracle));
    }
    row("weighted-row-sum-transport", dev, 1e-10);
    row("weighted-row-sum-closed-form", closed, 1e-12);
  }

  // Transport identity from the space side, after splitting to small support.
  {
    double dev = 0.0, closed = 0.0, collapse_dev = 0.0;
    for (int t = 0; t < trials; ++t) {
      const PartialTranslation whole = random_translation(X, rng);
      for (const auto& v : smallsupp_split(whole, P)) {
        const TranslationOp vo = from_partial_translation(X, v);
        const TranslationOp inner = matmul(matmul(Ninv, matmul(matmul(A, vo), A)), N);
        const TranslationOp lhs = psi_y(inner, P);
        const TranslationOp rhs = matmul(matmul(A, matmul(vo, adjoint(vo))), A);
        dev = std::max(dev, sup_deviation(lhs, rhs));

        std::vector<char> block_hit(P.num_blocks(), 0);
        for (int x : v.range()) block_hit[P.block_of(x)] = 1;
        std::vector<SparseMatrix<cplx>::Triplet> trip;
        for (int b = 0; b < P.num_blocks(); ++b) {
          if (!block_hit[b]) continue;
          const double nb = static_cast<double>(P.block_size(b));
          for (int x : P.block(b))
            for (int z : P.block(b)) trip.push_back({x, z, cplx(1.0 / (nb * nb))});
        }
        const TranslationOp oracle(X, SparseMatrix<cplx>(n, n, std::move(trip)));
        closed = std::max(closed, sup_deviation(lhs, oracle));
        closed = std::max(closed, sup_deviation(rhs, oracle));

        collapse_dev = std::max(
            collapse_dev, sup_deviation(matmul(collapse_op(v, P), matmul(A, vo)), vo));
      }
    }
    row("compressed-transport", dev, 1e-10);
    row("compressed-transport-closed-form", closed, 1e-12);
    row("collapse-absorbs-averaging", collapse_dev, 1e-12);
  }

  // Row-selector factorisation T = C·A·D.
  {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double single = 0.0, reassembled = 0.0;
    for (int t = 0; t < trials; ++t) {
      std::vector<SparseMatrix<cplx>::Triplet> trip;
      for (int b = 0; b < P.num_blocks(); ++b) {
        if (rand_below(rng, 4) == 0) continue;  // leave some blocks empty
        const auto& blk = P.block(b);
        const int x = blk[rand_below(rng, static_cast<int>(blk.size()))];
        const int c = X.component_of(x);
        const int k = 1 + rand_below(rng, 3);
        for (int i = 0; i < k; ++i) {
          const int z = X.component_offset(c) + rand_below(rng, X.component_size(c));
          trip.push_back({x, z, cplx(coef(rng), coef(rng))});
        }
      }
      const TranslationOp T(X, SparseMatrix<cplx>(n, n, std::move(trip)));
      const auto cad = cad_factors(T, P);
      single = std::max(single, sup_deviation(matmul(matmul(cad.C, A), cad.D), T));

      const TranslationOp G = random_within_components(X, rng);
      TranslationOp acc(X, SparseMatrix<cplx>(n, n, {}));
      for (const auto& f : cad_decomposition(G, P))
        acc = add(acc, matmul(matmul(f.C, A), f.D));
      reassembled = std::max(reassembled, sup_deviation(acc, G));
    }
    row("single-row-blocks-factor", single, 1e-12);
    row("factor-reassembly", reassembled, 1e-10);
  }

  // Lower bounds for pushing vectors through the weight: move a block-constant
  // vector orthogonal to one family of constants through N (or N⁻¹), project
  // out the other family, and the remaining tail must be at least the moved
  // vector's norm divided by sqrt(1 + (‖N‖‖N⁻¹‖)²).  The factor is measured,
  // not assumed.
  {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const auto comp_basis = component_constant_basis(X);
    const auto marker_basis = marker_constant_basis(P);
    const double bound_factor =
        1.0 / std::sqrt(1.0 + std::pow(rep.weight_norm * rep.weight_inv_norm, 2.0));
    double viol_x = 0.0, viol_y = 0.0;
    for (int t = 0; t < trials; ++t) {
      std::vector<double> z(n);
      for (double& v : z) v = coef(rng);
      const std::vector<double> base = block_average(P, z);

      // block-constant and orthogonal to component constants
      std::vector<double> xi = project_out(base, comp_basis);
      double nx = nrm2(xi);
      if (nx > 1e-8) {
        std::vector<double> moved(n);
        for (int i = 0; i < n; ++i)
          moved[i] = xi[i] / std::sqrt(static_cast<double>(P.n_of(i)));
        const double tail = residual_norm(moved, marker_basis);
        viol_x = std::max(viol_x, bound_factor * nrm2(moved) - tail);
      }

      // block-constant and orthogonal to the marker constants
      std::vector<double> eta = project_out(base, marker_basis);
      double ne = nrm2(eta);
      if (ne > 1e-8) {
        std::vector<double> moved(n);
        for (int i = 0; i < n; ++i)
          moved[i] = eta[i] * std::sqrt(static_cast<double>(P.n_of(i)));
        const double tail = residual_norm(moved, comp_basis);
        viol_y = std::max(viol_y, bound_factor * nrm2(moved) - tail);
      }
    }
    row("weight-transport-bound-from-x", std::max(0.0, viol_x), 1e-12);
    row("weight-transport-bound-from-y", std::max(0.0, viol_y), 1e-12);
  }

  // The weight matches the Laplacian kernels over the two spaces.
  {
    const auto kx = kernel_basis(laplacian(X, X.gen()).matrix);
    const auto ky = kernel_basis(laplacian(Y, Y.gen()).matrix);
    double dev = ky.size() == kx.size() ? 0.0 : 1.0;
    for (const auto& eta : ky) {
      std::vector<double> lifted(n);
      for (int x = 0; x < n; ++x)
        lifted[x] = eta[P.block_of(x)] / std::sqrt(static_cast<double>(P.n_of(x)));
      std::vector<double> pushed(n);
      for (int x = 0; x < n; ++x)
        pushed[x] = lifted[x] * std::sqrt(static_cast<double>(P.n_of(x)));
      const double nv = nrm2(pushed);
      auto basis = component_constant_basis(X);
      dev = std::max(dev, residual_norm(pushed, basis) / std::max(nv, 1e-30));
    }
    row("weight-kernel-bijection", dev, 1e-10);
  }

  rep.all_pass = true;
  for (const auto& r : rep.rows) rep.all_pass = rep.all_pass && r.pass;
  return rep;
}

}  // namespace coarset
