#include "coarset/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "coarset/decomp.hpp"
#include "coarset/kernels.hpp"

namespace coarset {

double norm(const Vector& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

cplx inner(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: length mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

TranslationOp::TranslationOp(const CoarseSpace& X, SparseMatrix<cplx> m)
    : space_(&X), mat_(std::move(m)) {
  if (mat_.rows() != X.num_points() || mat_.cols() != X.num_points())
    throw std::invalid_argument("TranslationOp: matrix shape does not match the space");
  for (const auto& t : mat_.entries()) {
    if (X.component_of(t.row) != X.component_of(t.col))
      throw std::invalid_argument(
          "TranslationOp: entry (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
          ") straddles two components");
  }
}

ControlledSet TranslationOp::support() const {
  std::vector<ControlledSet::Pair> pairs;
  pairs.reserve(mat_.entries().size());
  for (const auto& t : mat_.entries()) pairs.push_back({t.row, t.col});
  return ControlledSet(mat_.rows(), pairs);
}

TranslationOp identity_op(const CoarseSpace& X) {
  return TranslationOp(X, SparseMatrix<cplx>::identity(X.num_points()));
}

TranslationOp diagonal_op(const CoarseSpace& X, const Vector& values) {
  if (static_cast<int>(values.size()) != X.num_points())
    throw std::invalid_argument("diagonal_op: value count does not match the space");
  std::vector<SparseMatrix<cplx>::Triplet> trip;
  for (int x = 0; x < X.num_points(); ++x)
    if (values[x] != cplx(0.0)) trip.push_back({x, x, values[x]});
  return TranslationOp(X, SparseMatrix<cplx>(X.num_points(), X.num_points(), std::move(trip)));
}

TranslationOp from_partial_translation(const CoarseSpace& X, const PartialTranslation& t) {
  if (t.universe() != X.num_points())
    throw std::invalid_argument("from_partial_translation: universe size mismatch");
  std::vector<SparseMatrix<cplx>::Triplet> trip;
  for (const auto& e : t.mapping()) trip.push_back({e.second, e.first, cplx(1.0)});
  return TranslationOp(X, SparseMatrix<cplx>(X.num_points(), X.num_points(), std::move(trip)));
}

SparseMatrix<long long> int_matrix(const PartialTranslation& t) {
  std::vector<SparseMatrix<long long>::Triplet> trip;
  for (const auto& e : t.mapping()) trip.push_back({e.second, e.first, 1});
  return SparseMatrix<long long>(t.universe(), t.universe(), std::move(trip));
}

bool same_space(const TranslationOp& S, const TranslationOp& T) {
  return &S.space() == &T.space() || S.space() == T.space();
}

namespace {
void require_same_space(const TranslationOp& S, const TranslationOp& T, const char* who) {
  if (!same_space(S, T))
    throw std::domain_error(std::string(who) + ": operands live over different spaces");
}
}  // namespace

TranslationOp add(const TranslationOp& S, const TranslationOp& T) {
  require_same_space(S, T, "add");
  return TranslationOp(S.space(), add(S.matrix(), T.matrix()));
}

TranslationOp subtract(const TranslationOp& S, const TranslationOp& T) {
  require_same_space(S, T, "subtract");
  return TranslationOp(S.space(), subtract(S.matrix(), T.matrix()));
}

TranslationOp scale(cplx c, const TranslationOp& T) {
  return TranslationOp(T.space(), scale(c, T.matrix()));
}

TranslationOp matmul(const TranslationOp& S, const TranslationOp& T) {
  require_same_space(S, T, "matmul");
  return TranslationOp(S.space(), kernels::matmul(S.matrix(), T.matrix()));
}

TranslationOp adjoint(const TranslationOp& T) {
  return TranslationOp(T.space(), T.matrix().adjoint());
}

Vector apply(const TranslationOp& T, const Vector& xi) {
  if (static_cast<int>(xi.size()) != T.space().num_points())
    throw std::invalid_argument("apply: vector length does not match the space");
  return kernels::apply(T.matrix(), xi);
}

double sup_deviation(const TranslationOp& S, const TranslationOp& T) {
  require_same_space(S, T, "sup_deviation");
  double m = 0.0;
  const auto diff = subtract(S.matrix(), T.matrix());  // named: the loop holds a reference
  for (const auto& t : diff.entries()) m = std::max(m, std::abs(t.value));
  return m;
}

double sup_entry(const TranslationOp& T) {
  double m = 0.0;
  for (const auto& t : T.matrix().entries()) m = std::max(m, std::abs(t.value));
  return m;
}

TranslationOp phi(const TranslationOp& T) {
  Vector row(T.space().num_points(), cplx(0.0));
  for (const auto& t : T.matrix().entries()) row[t.row] += t.value;
  return diagonal_op(T.space(), row);
}

TranslationOp StandardForm::reassemble(const CoarseSpace& X) const {
  if (coefficients.size() != translations.size())
    throw std::invalid_argument("StandardForm: coefficient/translation count mismatch");
  TranslationOp acc(X, SparseMatrix<cplx>(X.num_points(), X.num_points(), {}));
  for (std::size_t i = 0; i < translations.size(); ++i)
    acc = add(acc, matmul(diagonal_op(X, coefficients[i]),
                          from_partial_translation(X, translations[i])));
  return acc;
}

StandardForm standard_form(const TranslationOp& T) {
  const int n = T.space().num_points();
  const auto& ent = T.matrix().entries();
  if (ent.empty()) return {};

  // Proper edge colouring of the bipartite multigraph rows-vs-columns whose
  // edges are the non-zero entries.  The classical alternating-path scheme
  // colours every edge with max-degree many colours.
  std::vector<int> deg_row(n, 0), deg_col(n, 0);
  for (const auto& t : ent) {
    ++deg_row[t.row];
    ++deg_col[t.col];
  }
  const int ncol = std::max(*std::max_element(deg_row.begin(), deg_row.end()),
                            *std::max_element(deg_col.begin(), deg_col.end()));

  // row_at[r][c] = column joined to r by the colour-c edge (-1 if none).
  std::vector<std::vector<int>> row_at(n, std::vector<int>(ncol, -1));
  std::vector<std::vector<int>> col_at(n, std::vector<int>(ncol, -1));

  auto first_free = [ncol](const std::vector<int>& at) {
    for (int c = 0; c < ncol; ++c)
      if (at[c] == -1) return c;
    throw std::logic_error("standard_form: no free colour at a vertex");
  };

  for (std::size_t e = 0; e < ent.size(); ++e) {
    const int r = ent[e].row, c = ent[e].col;
    const int a = first_free(row_at[r]);
    const int b = first_free(col_at[c]);
    if (a != b) {
      // Flip the maximal a/b-alternating path starting at c with its a-edge.
      // It cannot end at r (parity), so afterwards a is free at both ends.
      struct PathEdge { int row, col, colour; };
      std::vector<PathEdge> path;
      int col_cur = c;
      while (true) {
        const int r1 = col_at[col_cur][a];
        if (r1 == -1) break;
        path.push_back({r1, col_cur, a});
        const int c1 = row_at[r1][b];
        if (c1 == -1) break;
        path.push_back({r1, c1, b});
        col_cur = c1;
      }
      for (const auto& pe : path) {
        row_at[pe.row][pe.colour] = -1;
        col_at[pe.col][pe.colour] = -1;
      }
      for (const auto& pe : path) {
        const int other = a + b - pe.colour;
        row_at[pe.row][other] = pe.col;
        col_at[pe.col][other] = pe.row;
      }
    }
    row_at[r][a] = c;
    col_at[c][a] = r;
  }

  // Entries are unique (row, col) pairs, so the colour of each one can be
  // read back off the final tables.
  std::vector<int> colour_of(ent.size(), -1);
  for (std::size_t e = 0; e < ent.size(); ++e)
    for (int k = 0; k < ncol; ++k)
      if (row_at[ent[e].row][k] == ent[e].col) {
        colour_of[e] = k;
        break;
      }

  StandardForm out;
  out.coefficients.assign(ncol, Vector(n, cplx(0.0)));
  std::vector<std::vector<PartialTranslation::Entry>> maps(ncol);
  for (std::size_t e = 0; e < ent.size(); ++e) {
    const int c = colour_of[e];
    if (c < 0) throw std::logic_error("standard_form: an entry was left uncoloured");
    out.coefficients[c][ent[e].row] = ent[e].value;
    maps[c].push_back({ent[e].col, ent[e].row});  // source = column, target = row
  }
  for (int c = 0; c < ncol; ++c)
    out.translations.emplace_back(n, maps[c]);
  return out;
}

double constant_defect(const CoarseSpace& X, const Vector& xi, const ControlledSet& E) {
  if (static_cast<int>(xi.size()) != X.num_points())
    throw std::invalid_argument("constant_defect: vector length does not match the space");
  if (E.universe() != X.num_points())
    throw std::invalid_argument("constant_defect: controlled set universe mismatch");
  if (!X.pairs_within_components(E))
    throw std::domain_error("constant_defect: the controlled set must stay inside components");
  const ControlledSet F = E.symmetrized().off_diagonal();
  const auto dec = elementary_decomposition(F, ControlledSet(F.universe(), {}));
  double worst = 0.0;
  for (const auto& piece : dec.pieces) {
    const TranslationOp v = from_partial_translation(X, piece);
    // Qualified: an unqualified call would drag std::apply in through ADL.
    const Vector vs = coarset::apply(v, coarset::apply(adjoint(v), xi));
    const Vector vx = coarset::apply(v, xi);
    double s = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) s += std::norm(vs[i] - vx[i]);
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

}  // namespace coarset
