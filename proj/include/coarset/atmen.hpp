#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coarset/algebra.hpp"
#include "coarset/space.hpp"

namespace coarset {

/// Length of the shortest cycle in one component; nullopt for forests.
/// Exact: every vertex is used as a BFS root.
std::optional<int> girth(const CoarseSpace& X, int component);
std::vector<std::optional<int>> girths(const CoarseSpace& X);

/// Symmetric non-negative function with zero diagonal, stored densely per
/// component (row-major size×size blocks).
struct Kernel {
  const CoarseSpace* space = nullptr;
  std::vector<std::vector<double>> values;

  double at(int component, int i, int j) const;
};

Kernel distance_kernel(const CoarseSpace& X);
/// Graph distance capped at girth/3 per component (uncapped on forests).
Kernel truncated_distance_kernel(const CoarseSpace& X);
/// k(x, y) = ‖f(x) − f(y)‖² for a seeded Gaussian embedding f into R^dim;
/// negative type by construction.
Kernel embedding_kernel(const CoarseSpace& X, int dim, unsigned long long seed);
Kernel explicit_kernel(const CoarseSpace& X, std::vector<std::vector<double>> values);

struct NegativeTypeReport {
  bool ok = false;
  bool symmetric = false;
  bool zero_diagonal = false;
  bool nonnegative = false;
  double min_centred_eigenvalue = 0.0;  // of −½·J k J over all components
  /// band_profile[r] = min of k over pairs at graph distance ≥ r+1; its
  /// monotone growth is the finite-scale stand-in for properness.
  std::vector<double> band_profile;
  std::string reason;  // first failing condition, empty when ok
};

/// Checks symmetry, zero diagonal, non-negativity, and the centred-Gram
/// positivity that characterises negative type (within 1e−9).
NegativeTypeReport negative_type_check(const Kernel& k);

struct SchoenbergResult {
  std::vector<std::vector<double>> gram;  // per component, e^{−t·k}, dense
  double min_eigenvalue = 0.0;
  bool psd = false;  // min eigenvalue ≥ −1e−9
};

/// Entrywise exponential e^{−t·k}; refuses kernels that fail the negative
/// type check, and reports the smallest eigenvalue over all components.
SchoenbergResult schoenberg(const Kernel& k, double t);

struct AnnulusMatching {
  int component = 0;
  int r = 0, s = 0;        // displacements lie in (r, s]
  int s_start = 0;         // first band end tried: 3·(N(ball_r) + r)
  std::vector<int> sigma;  // local permutation of the component
};

/// A permutation moving every point further than r but at most s, found as a
/// perfect matching in the bipartite far-pair graph.  The search starts at
/// the band end suggested by the counting bound ⌊s/3⌋ − r ≥ N(ball_r) and
/// widens until a matching exists; if even the full diameter band fails, the
/// component is too small for this r and an error is thrown.
AnnulusMatching annulus_matching(const CoarseSpace& X, int component, int r);

/// (1/|C|) Σ_{x,y ∈ C} Δ_{xy} e^{−t·k(x,y)} for the component's generating
/// Laplacian Δ.  For d-regular components with the graph-distance kernel
/// this collapses to d(1 − e^{−t}).
double witness_expectation(const CoarseSpace& X, int component, const Kernel& k, double t);

/// Pointwise sesquilinear form x ↦ Σ_{y,z} conj(S_{xy}) T_{xz} e^{−t·k(y,z)}.
Vector form_evaluate(const TranslationOp& S, const TranslationOp& T, const Kernel& k, double t);

}  // namespace coarset
