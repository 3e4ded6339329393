#pragma once

#include <complex>
#include <vector>

#include "coarset/partial_translation.hpp"
#include "coarset/space.hpp"
#include "coarset/sparse.hpp"

namespace coarset {

using cplx = std::complex<double>;
using Vector = std::vector<cplx>;

double norm(const Vector& v);
cplx inner(const Vector& a, const Vector& b);  // conjugate-linear in the first slot

/// A matrix over a space's points whose non-zero positions form a controlled
/// set inside the components.  Immutable; all arithmetic returns new values.
class TranslationOp {
public:
  TranslationOp() = default;
  TranslationOp(const CoarseSpace& X, SparseMatrix<cplx> m);

  const CoarseSpace& space() const { return *space_; }
  const SparseMatrix<cplx>& matrix() const { return mat_; }
  ControlledSet support() const;

private:
  const CoarseSpace* space_ = nullptr;
  SparseMatrix<cplx> mat_;
};

TranslationOp identity_op(const CoarseSpace& X);
TranslationOp diagonal_op(const CoarseSpace& X, const Vector& values);
/// v with v_{xy} = 1 exactly when t(y) = x.
TranslationOp from_partial_translation(const CoarseSpace& X, const PartialTranslation& t);
/// The same 0/1 matrix in exact integer form (no space attached).
SparseMatrix<long long> int_matrix(const PartialTranslation& t);

bool same_space(const TranslationOp& S, const TranslationOp& T);

TranslationOp add(const TranslationOp& S, const TranslationOp& T);
TranslationOp subtract(const TranslationOp& S, const TranslationOp& T);
TranslationOp scale(cplx c, const TranslationOp& T);
TranslationOp matmul(const TranslationOp& S, const TranslationOp& T);
TranslationOp adjoint(const TranslationOp& T);
Vector apply(const TranslationOp& T, const Vector& xi);

/// Largest absolute entry of S - T; the workhorse of every tolerance check.
double sup_deviation(const TranslationOp& S, const TranslationOp& T);
double sup_entry(const TranslationOp& T);

/// Row-sum map onto diagonal operators: phi(T) = diag(x ↦ Σ_y T_{xy}).
/// Unital, restricts to the identity on diagonals, and sends a partial
/// translation v to vv*.
TranslationOp phi(const TranslationOp& T);

/// T written as Σ_i diag(f_i)·v_i with pairwise disjoint elementary supports.
/// The pieces come from a proper edge colouring of the support's bipartite
/// row/column graph, so their number is the maximum row/column fill, which
/// never exceeds N(supp T).
struct StandardForm {
  std::vector<Vector> coefficients;
  std::vector<PartialTranslation> translations;

  TranslationOp reassemble(const CoarseSpace& X) const;
};

StandardForm standard_form(const TranslationOp& T);

/// max over the antisymmetric pieces v of the elementary decomposition of
/// E ∪ E⁻¹ of ‖(vv* − v)ξ‖.  Zero exactly when ξ is constant along every
/// E-reachability class.
double constant_defect(const CoarseSpace& X, const Vector& xi, const ControlledSet& E);

}  // namespace coarset
