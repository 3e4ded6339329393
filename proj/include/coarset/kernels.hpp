#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "coarset/space.hpp"
#include "coarset/sparse.hpp"

// Compute kernels.  Every routine here comes in two flavours: a serial
// reference and an OpenMP version parallelised over independent work items
// (rows, BFS sources, components, mask ranges).  The parallel versions do the
// per-item work in exactly the same order as the serial ones, so results are
// bitwise identical and the tests compare them directly.

namespace coarset::kernels {

/// CSR adjacency of the off-diagonal generating pairs of a space.
/// Neighbour lists are sorted; distances across components are -1.
struct Graph {
  int n = 0;
  std::vector<int> ptr;
  std::vector<int> adj;
};

Graph graph_from_space(const CoarseSpace& X);
Graph graph_from_pairs(int n, const std::vector<std::pair<int, int>>& sym_pairs);

void bfs_distances(const Graph& g, int source, std::vector<int>& dist);
std::vector<std::vector<int>> all_pairs_distances_serial(const Graph& g);
std::vector<std::vector<int>> all_pairs_distances(const Graph& g);

// --- sparse matrix products -------------------------------------------------

namespace detail {

template <typename Scalar>
struct Csr {
  int rows = 0, cols = 0;
  std::vector<int> ptr, col;
  std::vector<Scalar> val;
};

template <typename Scalar>
Csr<Scalar> to_csr(const SparseMatrix<Scalar>& A) {
  Csr<Scalar> m;
  m.rows = A.rows();
  m.cols = A.cols();
  m.ptr.assign(m.rows + 1, 0);
  for (const auto& t : A.entries()) ++m.ptr[t.row + 1];
  for (int i = 0; i < m.rows; ++i) m.ptr[i + 1] += m.ptr[i];
  m.col.reserve(A.nnz());
  m.val.reserve(A.nnz());
  for (const auto& t : A.entries()) {  // entries already row-major sorted
    m.col.push_back(t.col);
    m.val.push_back(t.value);
  }
  return m;
}

// One output row of A*B: scatter-accumulate along A's row, then emit in
// column order.  Both flavours call this, which keeps them bitwise equal.
template <typename Scalar>
void product_row(const Csr<Scalar>& A, const Csr<Scalar>& B, int row,
                 std::vector<Scalar>& scratch, std::vector<int>& touched,
                 std::vector<typename SparseMatrix<Scalar>::Triplet>& out) {
  touched.clear();
  for (int ka = A.ptr[row]; ka < A.ptr[row + 1]; ++ka) {
    const int mid = A.col[ka];
    const Scalar av = A.val[ka];
    for (int kb = B.ptr[mid]; kb < B.ptr[mid + 1]; ++kb) {
      const int c = B.col[kb];
      if (scratch[c] == Scalar{}) touched.push_back(c);
      scratch[c] += av * B.val[kb];
    }
  }
  std::sort(touched.begin(), touched.end());
  for (int c : touched) {
    if (scratch[c] != Scalar{}) out.push_back({row, c, scratch[c]});
    scratch[c] = Scalar{};
  }
}

}  // namespace detail

template <typename Scalar>
SparseMatrix<Scalar> matmul_serial(const SparseMatrix<Scalar>& A, const SparseMatrix<Scalar>& B) {
  if (A.cols() != B.rows()) throw std::domain_error("matmul: shape mismatch");
  const auto ca = detail::to_csr(A);
  const auto cb = detail::to_csr(B);
  std::vector<typename SparseMatrix<Scalar>::Triplet> out;
  std::vector<Scalar> scratch(B.cols(), Scalar{});
  std::vector<int> touched;
  for (int r = 0; r < A.rows(); ++r) detail::product_row(ca, cb, r, scratch, touched, out);
  return SparseMatrix<Scalar>(A.rows(), B.cols(), std::move(out));
}

template <typename Scalar>
SparseMatrix<Scalar> matmul(const SparseMatrix<Scalar>& A, const SparseMatrix<Scalar>& B) {
  if (A.cols() != B.rows()) throw std::domain_error("matmul: shape mismatch");
  const auto ca = detail::to_csr(A);
  const auto cb = detail::to_csr(B);
  const int rows = A.rows();
  std::vector<std::vector<typename SparseMatrix<Scalar>::Triplet>> per_row(rows);
#pragma omp parallel
  {
    std::vector<Scalar> scratch(B.cols(), Scalar{});
    std::vector<int> touched;
#pragma omp for schedule(static)
    for (int r = 0; r < rows; ++r) detail::product_row(ca, cb, r, scratch, touched, per_row[r]);
  }
  std::vector<typename SparseMatrix<Scalar>::Triplet> out;
  for (auto& row : per_row) out.insert(out.end(), row.begin(), row.end());
  return SparseMatrix<Scalar>(A.rows(), B.cols(), std::move(out));
}

template <typename Scalar>
std::vector<Scalar> apply_serial(const SparseMatrix<Scalar>& A, const std::vector<Scalar>& x) {
  if (static_cast<int>(x.size()) != A.cols()) throw std::domain_error("apply: length mismatch");
  std::vector<Scalar> y(A.rows(), Scalar{});
  for (const auto& t : A.entries()) y[t.row] += t.value * x[t.col];
  return y;
}

template <typename Scalar>
std::vector<Scalar> apply(const SparseMatrix<Scalar>& A, const std::vector<Scalar>& x) {
  if (static_cast<int>(x.size()) != A.cols()) throw std::domain_error("apply: length mismatch");
  const auto csr = detail::to_csr(A);
  std::vector<Scalar> y(A.rows(), Scalar{});
#pragma omp parallel for schedule(static)
  for (int r = 0; r < csr.rows; ++r) {
    Scalar acc{};
    for (int k = csr.ptr[r]; k < csr.ptr[r + 1]; ++k) acc += csr.val[k] * x[csr.col[k]];
    y[r] = acc;
  }
  return y;
}

// --- deterministic reductions ----------------------------------------------

/// Fixed-chunk compensated-order sum: partial sums over 1024-element chunks
/// are combined in chunk order, so the result does not depend on the thread
/// count.  The serial flavour uses the identical chunking.
double chunked_sum_serial(const std::vector<double>& values);
double chunked_sum(const std::vector<double>& values);

// --- exact Cheeger scan ------------------------------------------------------

/// Minimises cut(S)/|S| over nonempty S with |S| <= n/2, given per-vertex
/// neighbour bitmasks of a connected graph on n <= 24 vertices.  Comparisons
/// and tie-breaks are exact integer arithmetic, so both flavours return the
/// identical optimal subset (smallest cut, then smallest size, then smallest
/// mask).
struct CheegerCut {
  std::uint32_t subset = 0;
  long long cut = 0;
  int size = 0;
  double value = 0.0;
};

CheegerCut cheeger_scan_serial(const std::vector<std::uint32_t>& nbr);
CheegerCut cheeger_scan(const std::vector<std::uint32_t>& nbr);

}  // namespace coarset::kernels
