#pragma once

#include <string>
#include <vector>

#include "coarset/algebra.hpp"
#include "coarset/decomp.hpp"
#include "coarset/space.hpp"

namespace coarset {

/// Δ^E: −1 at each pair of (E ∪ E⁻¹) ∖ diag inside a component, neighbour
/// count on the diagonal.  Symmetric, integer, row sums zero, and positive
/// semidefinite.
struct Laplacian {
  const CoarseSpace* space = nullptr;
  ControlledSet source;            // E as handed in
  ControlledSet edges;             // (E ∪ E⁻¹) ∖ diag — all the matrix sees
  SparseMatrix<long long> matrix;  // exact

  TranslationOp op() const;  // the same matrix over ℂ
};

Laplacian laplacian(const CoarseSpace& X, const ControlledSet& E);

/// vv* + v*v − v − v* for the partial translation v = t; equals the
/// Laplacian of graph(t) ∪ graph(t)⁻¹ when t is antisymmetric.
SparseMatrix<long long> elementary_laplacian(const PartialTranslation& t);

/// For symmetric E ⊆ F: Δ^F = Δ^E + Σ_i Δ^{E_i}, the E_i being the
/// antisymmetric elementary pieces of F relative to E.  Integer-exact.
struct LaplacianSplit {
  Laplacian total;  // Δ^F
  Laplacian base;   // Δ^E
  std::vector<PartialTranslation> pieces;
  std::vector<SparseMatrix<long long>> piece_laplacians;
};

LaplacianSplit laplacian_sum_decomposition(const CoarseSpace& X, const ControlledSet& F,
                                           const ControlledSet& E);

struct ComponentSpectrum {
  int component = 0;
  int size = 0;
  std::vector<double> eigenvalues;  // ascending; the full spectrum when complete
  bool complete = true;             // false ⇒ only extremal values were computed
  double lambda_max = 0.0;
  double gap = 0.0;  // smallest eigenvalue above the zero threshold; 0 if none
  int kernel_dim = 0;
};

struct SpectralReport {
  std::vector<ComponentSpectrum> components;
  double min_gap = 0.0;  // smallest per-component gap
};

/// |λ| counts as zero below 1e−8 · max(1, λ_max).
double zero_threshold(double lambda_max);

/// Per-component eigensolve: dense and complete up to `dense_cutoff` points,
/// extremal-only (flagged) above it.  Eigenvalues below −1e−9 abort — the
/// matrices are positive semidefinite by construction, so that is a bug, not
/// data.  Components are processed independently and reported in index order.
SpectralReport spectrum(const Laplacian& L, int dense_cutoff = 4096,
                        unsigned long long seed = 1);

struct KernelCheck {
  bool ok = false;
  int kernel_dim = 0;
  int expected = 0;         // number of components
  double max_deviation = 0.0;
  std::vector<double> witness;  // a kernel vector far from component-constant
};

/// Verifies that ker Δ^E is exactly the component-constant functions.  E must
/// generate: every generating pair of the space has to lie in some power of
/// E ∪ E⁻¹ ∪ diag; otherwise the question is ill-posed and the call refuses.
KernelCheck kernel_is_constants(const CoarseSpace& X, const ControlledSet& E, double tol);

struct ExpanderVerdict {
  std::vector<int> sizes;
  std::vector<int> max_degrees;
  std::vector<double> gaps;
  bool sizes_increasing = false;  // strictly, along the whole prefix
  bool degrees_bounded = true;    // finite prefix: always true, degree reported
  int max_degree = 0;
  double min_gap = 0.0;
  bool gap_at_least_c = false;
  bool expander_evidence = false;
  std::string failing;  // first failing condition, empty if none
};

/// Evidence on a finite prefix of a sequence: growing sizes, bounded degree,
/// gaps ≥ c.  Never a certificate — the conditions are asymptotic.
ExpanderVerdict expander_verdict(const std::vector<CoarseSpace>& sequence, double c,
                                 int dense_cutoff = 4096, unsigned long long seed = 1);

struct CheegerEstimate {
  double value = 0.0;
  bool exact = false;       // brute force (size ≤ 24) vs spectral sweep bound
  std::vector<int> subset;  // global point ids of the best cut found
};

/// min over S, |S| ≤ |C|/2, of cut(S)/|S| on one component of the space's
/// generating graph: exact for ≤ 24 points, Fiedler-sweep upper bound above.
CheegerEstimate cheeger(const CoarseSpace& X, int component, int dense_cutoff = 4096,
                        unsigned long long seed = 1);

}  // namespace coarset
