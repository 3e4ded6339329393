#pragma once

#include <array>
#include <vector>

#include "coarset/controlled_set.hpp"
#include "coarset/partial_translation.hpp"

namespace coarset {

/// Three-way split B = B0 ⊔ B1 ⊔ B2 of the domain of a fixed-point-free
/// partial bijection t, chosen so that t(B_i) ∩ B_i = ∅ for each part.
///
/// The split walks the orbits of x ↦ t(x) inside the domain: chains alternate
/// parts 0/1 from their head, cycles alternate from their minimum-id point,
/// and an odd-length cycle sends its last point to part 2 (two parts cannot
/// break an odd cycle).  Parts may be empty; the output is deterministic.
struct Tripartition {
  std::array<std::vector<int>, 3> parts;
};

Tripartition tripartition(const PartialTranslation& t);

/// t cut along its tripartition; at most three antisymmetric pieces whose
/// merge is t again.  Empty pieces are dropped.
std::vector<PartialTranslation> split_antisymmetric(const PartialTranslation& t);

/// F = base ⊔ diagonal ⊔ ⊔_i (graph(t_i) ∪ graph(t_i)⁻¹), all parts pairwise
/// disjoint, every piece antisymmetric.
struct ElementaryDecomposition {
  ControlledSet base;                      // the prescribed E ⊆ F
  ControlledSet diagonal;                  // diagonal pairs of F ∖ E
  std::vector<PartialTranslation> pieces;  // antisymmetric partial translations

  ControlledSet reassemble() const;
};

/// Splits a symmetric controlled set F over a symmetric base E ⊆ F.  Pieces
/// are produced by a greedy scan in pair order: repeatedly take a maximal
/// elementary subset of what remains (never keeping a pair together with its
/// reverse), remove it together with its reverse, and cut the result into
/// antisymmetric parts.  The greedy stage yields at most 2·N(F) − 1 maximal
/// subsets, so at most 3·(2·N(F) − 1) pieces come out.
ElementaryDecomposition elementary_decomposition(const ControlledSet& F,
                                                 const ControlledSet& E);

/// One block of a factorisation: t restricted to `points` equals
/// chain[n-1] ∘ ... ∘ chain[0], each step an elementary move inside E.
struct FactorBlock {
  std::vector<int> points;                // subset of the domain of t, sorted
  std::vector<PartialTranslation> chain;  // chain[j] maps r_j-image onto r_{j+1}-image

  PartialTranslation composed() const;
};

struct Factorisation {
  int power = 0;  // the n of E^{∘n}
  std::vector<FactorBlock> blocks;

  PartialTranslation reassemble() const;
};

/// Writes t, whose graph must sit inside E^{∘n}, as a disjoint union of
/// n-step chains through E.  Per-point chains follow BFS shortest paths with
/// minimum-id tie-breaks, padded by identity steps at the target when E has
/// the loop there, and fall back to exact-length-n layered chains otherwise.
/// Blocks are grown so that on each one every chain stage is a bijection and
/// each step is either an identity or moves its whole support off itself.
Factorisation factor_through(const PartialTranslation& t, const ControlledSet& E, int n);

}  // namespace coarset
