#pragma once

#include <string>
#include <utility>
#include <vector>

#include "coarset/algebra.hpp"
#include "coarset/space.hpp"

namespace coarset {

/// X carved into blocks U_y around marked points y ∈ Y: the blocks partition
/// X, each block contains its marker, stays inside one component, and holds
/// at most 64 points (so the weight operator stays well conditioned).
///
/// The marked points inherit a quotient space structure (one point per
/// block, blocks adjacent when some generating pair joins them), which is
/// where compressed operators live.
class DensePartition {
public:
  DensePartition(const CoarseSpace& X, std::vector<std::vector<int>> blocks,
                 std::vector<int> markers);

  const CoarseSpace& space() const { return *space_; }
  const CoarseSpace& marker_space() const { return y_space_; }

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const std::vector<int>& block(int b) const { return blocks_.at(b); }
  const std::vector<int>& markers() const { return markers_; }
  int block_of(int x) const { return block_of_.at(x); }
  int block_size(int b) const { return static_cast<int>(blocks_.at(b).size()); }
  int n_of(int x) const { return block_size(block_of(x)); }

  int max_block_size() const;
  int min_block_size() const;

private:
  const CoarseSpace* space_ = nullptr;
  std::vector<std::vector<int>> blocks_;  // sorted gids, indexed by marker order
  std::vector<int> markers_;              // sorted gids, markers_[b] ∈ blocks_[b]
  std::vector<int> block_of_;
  CoarseSpace y_space_;
};

/// Assign every point to its nearest marked point (graph distance along the
/// generating edges, ties to the smallest marker id).  Points farther than
/// `radius` from every marker are reported in the thrown error.
DensePartition build_partition(const CoarseSpace& X, const std::vector<int>& Y, int radius);

/// Explicit marker → block association, validated.
DensePartition partition_from_blocks(const CoarseSpace& X,
                                     const std::vector<std::pair<int, std::vector<int>>>& assoc);

/// A: block averaging, A_{xz} = n(x)⁻¹ when x, z share a block.  An
/// orthogonal projection onto the block-constant functions.
TranslationOp averaging_op(const DensePartition& P);
/// N = diag n(x)^{1/2} and its inverse.
TranslationOp weight_op(const DensePartition& P);
TranslationOp weight_inv_op(const DensePartition& P);

/// Compression onto the marker space: α(T)_{y₁y₂} = n(y₁)^{-1/2} n(y₂)^{-1/2}
/// Σ_{x ∈ U_{y₁}, z ∈ U_{y₂}} T_{xz}.  Requires ATA = T within 1e−10.
TranslationOp alpha(const TranslationOp& T, const DensePartition& P);
/// Inverse of alpha: β(S)_{xz} = n(x)^{-1/2} n(z)^{-1/2} S_{y(x)y(z)}.
TranslationOp beta(const TranslationOp& S, const DensePartition& P);
/// β ∘ (row sums over markers) ∘ α.
TranslationOp psi_y(const TranslationOp& T, const DensePartition& P);
/// The same map written as one explicit matrix formula; used to cross-check.
TranslationOp psi_y_explicit(const TranslationOp& T, const DensePartition& P);

/// Splits v into at most (max block size)² pieces, each touching every
/// block in at most one range point and at most one domain point.
std::vector<PartialTranslation> smallsupp_split(const PartialTranslation& v,
                                                const DensePartition& P);

/// T = C·A·D whenever each block meets the row support of T in at most one
/// point: C marks those rows across their blocks, D transports block-averaged
/// column sums.
struct CadFactors {
  TranslationOp C, D;
};
CadFactors cad_factors(const TranslationOp& T, const DensePartition& P);
/// General T: split by row rank inside each block, factor each piece.
std::vector<CadFactors> cad_decomposition(const TranslationOp& T, const DensePartition& P);

/// C_{xz} = (vv*)_{xx} when x, z share a block: collapses each block onto
/// its range point of v, so that C·A·v = v for small-support v.
TranslationOp collapse_op(const PartialTranslation& v, const DensePartition& P);

struct IdentityRow {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct IdentityReport {
  std::vector<IdentityRow> rows;
  bool all_pass = false;
  double weight_norm = 0.0;      // ‖N‖
  double weight_inv_norm = 0.0;  // ‖N⁻¹‖
};

/// Deterministically exercises the whole identity stack on random data:
/// projection/commutation facts for A and N, the α/β isomorphism, the
/// compressed-row-sum transport identities with their closed forms, CAD
/// factorisations, the collapse identity, the norm lower bounds for moving
/// vectors through N, and the kernel bijection induced by N.
IdentityReport identity_suite(const DensePartition& P, unsigned long long seed, int trials);

}  // namespace coarset
