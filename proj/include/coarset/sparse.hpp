#pragma once

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coarset {

template <typename Scalar>
Scalar conj_scalar(const Scalar& s) {
  return s;
}
template <typename T>
std::complex<T> conj_scalar(const std::complex<T>& s) {
  return std::conj(s);
}

/// Sorted-triplet sparse matrix.  Duplicate positions are summed and exact
/// zeros dropped on construction, so equal matrices compare equal entrywise.
/// Scalar is either a plain integer type (exact arithmetic) or
/// std::complex<double>.
template <typename Scalar>
class SparseMatrix {
public:
  struct Triplet {
    int row = 0;
    int col = 0;
    Scalar value{};
  };

  SparseMatrix() = default;

  SparseMatrix(int rows, int cols, std::vector<Triplet> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows_ < 0 || cols_ < 0)
      throw std::invalid_argument("SparseMatrix: negative dimension");
    for (const auto& t : entries_)
      if (t.row < 0 || t.row >= rows_ || t.col < 0 || t.col >= cols_)
        throw std::invalid_argument("SparseMatrix: entry (" + std::to_string(t.row) + ", " +
                                    std::to_string(t.col) + ") outside a " +
                                    std::to_string(rows_) + "x" + std::to_string(cols_) +
                                    " matrix");
    std::sort(entries_.begin(), entries_.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<Triplet> merged;
    merged.reserve(entries_.size());
    for (const auto& t : entries_) {
      if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col)
        merged.back().value += t.value;
      else
        merged.push_back(t);
    }
    entries_.clear();
    for (const auto& t : merged)
      if (t.value != Scalar{}) entries_.push_back(t);
  }

  static SparseMatrix identity(int n) {
    std::vector<Triplet> e;
    e.reserve(n);
    for (int i = 0; i < n; ++i) e.push_back({i, i, Scalar{1}});
    return SparseMatrix(n, n, std::move(e));
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<Triplet>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }

  Scalar coeff(int r, int c) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair<int, int>{r, c},
                               [](const Triplet& t, const std::pair<int, int>& p) {
                                 return t.row != p.first ? t.row < p.first : t.col < p.second;
                               });
    if (it != entries_.end() && it->row == r && it->col == c) return it->value;
    return Scalar{};
  }

  SparseMatrix transpose() const {
    std::vector<Triplet> e;
    e.reserve(entries_.size());
    for (const auto& t : entries_) e.push_back({t.col, t.row, t.value});
    return SparseMatrix(cols_, rows_, std::move(e));
  }

  SparseMatrix adjoint() const {
    std::vector<Triplet> e;
    e.reserve(entries_.size());
    for (const auto& t : entries_) e.push_back({t.col, t.row, conj_scalar(t.value)});
    return SparseMatrix(cols_, rows_, std::move(e));
  }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.entries_.size() != b.entries_.size())
      return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
      const auto& s = a.entries_[i];
      const auto& t = b.entries_[i];
      if (s.row != t.row || s.col != t.col || s.value != t.value) return false;
    }
    return true;
  }

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Triplet> entries_;
};

template <typename Scalar>
SparseMatrix<Scalar> add(const SparseMatrix<Scalar>& A, const SparseMatrix<Scalar>& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw std::domain_error("add: shape mismatch");
  std::vector<typename SparseMatrix<Scalar>::Triplet> e;
  e.reserve(A.nnz() + B.nnz());
  e.insert(e.end(), A.entries().begin(), A.entries().end());
  e.insert(e.end(), B.entries().begin(), B.entries().end());
  return SparseMatrix<Scalar>(A.rows(), A.cols(), std::move(e));
}

template <typename Scalar>
SparseMatrix<Scalar> scale(const Scalar& c, const SparseMatrix<Scalar>& A) {
  std::vector<typename SparseMatrix<Scalar>::Triplet> e;
  e.reserve(A.nnz());
  for (const auto& t : A.entries()) e.push_back({t.row, t.col, c * t.value});
  return SparseMatrix<Scalar>(A.rows(), A.cols(), std::move(e));
}

template <typename Scalar>
SparseMatrix<Scalar> subtract(const SparseMatrix<Scalar>& A, const SparseMatrix<Scalar>& B) {
  return add(A, scale(Scalar{-1}, B));
}

}  // namespace coarset
