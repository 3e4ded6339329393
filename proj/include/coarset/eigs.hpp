#pragma once

#include <vector>

#include "coarset/sparse.hpp"

namespace coarset::eigs {

struct DenseResult {
  std::vector<double> eigenvalues;           // ascending
  std::vector<std::vector<double>> vectors;  // column i pairs with eigenvalue i
};

/// Full spectrum of a symmetric matrix (densified internally, so keep the
/// dimension in the few-thousand range).
DenseResult dense_spectrum(const SparseMatrix<double>& A, bool want_vectors);

struct LanczosResult {
  std::vector<double> bottom;  // smallest Ritz values outside the deflated span
  std::vector<std::vector<double>> bottom_vectors;  // matching Ritz vectors
  double top = 0.0;            // largest Ritz value
  int iterations = 0;
  bool converged = false;
};

/// Extremal eigenvalues of a symmetric matrix by Lanczos iteration with full
/// reorthogonalisation.  `deflate` spans an invariant subspace to be excluded
/// (e.g. known kernel vectors); the returned values describe the orthogonal
/// complement.  Deterministic for a fixed seed.
LanczosResult lanczos_extremes(const SparseMatrix<double>& A,
                               const std::vector<std::vector<double>>& deflate,
                               int want_bottom, int max_iter, unsigned long long seed);

}  // namespace coarset::eigs
