#pragma once

#include <string>
#include <vector>

#include "coarset/space.hpp"
#include "coarset/sparse.hpp"

namespace coarset {

/// A finite group together with the right-multiplication action of a
/// symmetric generating set.  Elements are canonical integer encodings held
/// in sorted order, so vertex numbering is reproducible.
struct GroupQuotient {
  int size = 0;
  int identity = 0;                            // element index
  std::vector<std::vector<int>> elements;      // canonical encodings, ascending
  std::vector<std::vector<int>> generators;    // distinct non-identity images of S
  std::vector<std::vector<int>> act;           // act[s][x] = index of x · generators[s]
  std::string label;                           // e.g. "cyclic 8", "sl2 7"
};

/// ℤ/n with S = {+1, −1}.  The two generators coincide at n = 2 and vanish
/// at n = 1; the surviving distinct images are kept.
GroupQuotient cyclic_quotient(long long n);

/// SL(2, p) generated by the two elementary matrices [[1,1],[0,1]] and
/// [[1,0],[1,1]] and their inverses, enumerated by orbit closure.  Requires
/// p prime; the resulting order is checked against p(p²−1).
GroupQuotient sl2_quotient(long long p);

/// Subgroup of the symmetric group generated by explicit one-line
/// permutations; the generating set must be symmetric and identity-free.
GroupQuotient permutation_quotient(const std::vector<std::vector<int>>& gens);

/// Single-component space on the group with edges {x, x·s}.
CoarseSpace cayley_space(const GroupQuotient& q);

/// Σ_{s}(1 − ρ(s)) over the distinct generator images, as an exact integer
/// matrix; equals the Laplacian of the Cayley edge set entry for entry.
SparseMatrix<long long> group_laplacian_image(const GroupQuotient& q);

enum class FamilyKind { cyclic_tower, sl2_mod_p, permutation };

struct BoxSpace {
  CoarseSpace space;                     // disjoint union, tower order
  std::vector<GroupQuotient> quotients;  // one per component
  FamilyKind kind = FamilyKind::cyclic_tower;
  std::vector<long long> parameters;     // moduli or primes, as given
};

/// Tower of cyclic quotients; each modulus must divide the next.
BoxSpace box_space_cyclic(const std::vector<long long>& tower);
/// SL(2, p) components for the listed primes (a family variant: quotients at
/// distinct primes rather than a literal nested tower).
BoxSpace box_space_sl2(const std::vector<long long>& primes);

}  // namespace coarset
