#include "coarset/eigs.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>

#include "coarset/kernels.hpp"

namespace coarset::eigs {

DenseResult dense_spectrum(const SparseMatrix<double>& A, bool want_vectors) {
  if (A.rows() != A.cols()) throw std::invalid_argument("dense_spectrum: matrix not square");
  const int n = A.rows();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : A.entries()) M(t.row, t.col) = t.value;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      M, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("dense_spectrum: eigensolver failed to converge");
  DenseResult out;
  out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  if (want_vectors) {
    out.vectors.assign(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
      for (int r = 0; r < n; ++r) out.vectors[i][r] = es.eigenvectors()(r, i);
  }
  return out;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double c, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * x[i];
}

double nrm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void orthogonalise(std::vector<double>& w, const std::vector<std::vector<double>>& basis) {
  // Two classical Gram-Schmidt sweeps keep the loss of orthogonality at
  // machine-epsilon level, which is what lets long Lanczos runs stay honest.
  for (int sweep = 0; sweep < 2; ++sweep)
    for (const auto& b : basis) axpy(-dot(b, w), b, w);
}

}  // namespace

LanczosResult lanczos_extremes(const SparseMatrix<double>& A,
                               const std::vector<std::vector<double>>& deflate,
                               int want_bottom, int max_iter, unsigned long long seed) {
  if (A.rows() != A.cols()) throw std::invalid_argument("lanczos_extremes: matrix not square");
  if (want_bottom < 1) throw std::invalid_argument("lanczos_extremes: want_bottom must be >= 1");
  const int n = A.rows();

  std::vector<std::vector<double>> shield;  // orthonormalised deflation vectors
  for (auto d : deflate) {
    orthogonalise(d, shield);
    const double nd = nrm2(d);
    if (nd > 1e-12) {
      for (double& x : d) x /= nd;
      shield.push_back(std::move(d));
    }
  }
  const int n_eff = n - static_cast<int>(shield.size());
  const int m_cap = std::min(max_iter, n_eff);
  if (m_cap < 1) throw std::invalid_argument("lanczos_extremes: nothing left after deflation");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  std::vector<std::vector<double>> V;
  V.reserve(m_cap);
  std::vector<double> alpha, beta;  // beta[j] couples v_j and v_{j+1}

  std::vector<double> v(n);
  for (double& x : v) x = unit(rng);
  orthogonalise(v, shield);
  {
    const double nv = nrm2(v);
    if (nv < 1e-12) throw std::runtime_error("lanczos_extremes: degenerate start vector");
    for (double& x : v) x /= nv;
  }
  V.push_back(v);

  LanczosResult out;
  const double tol = 1e-10;

  // alpha[0..m-1] and beta[0..m-2] define the tridiagonal section; `tail` is
  // the coupling to the first un-kept basis vector, so the Ritz residual of
  // pair i is tail * |last component of tridiagonal eigenvector i|.
  auto finalise = [&](double tail) -> bool {
    const int m = static_cast<int>(alpha.size());
    if (m < want_bottom) return false;
    Eigen::VectorXd a(m), b(std::max(0, m - 1));
    for (int i = 0; i < m; ++i) a[i] = alpha[i];
    for (int i = 0; i + 1 < m; ++i) b[i] = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(a, b, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) return false;
    const double scale = std::max(1.0, std::abs(es.eigenvalues()[m - 1]));
    const int nb = std::min(want_bottom, m);
    bool ok = true;
    for (int i = 0; i < nb && ok; ++i)
      ok = std::abs(tail * es.eigenvectors()(m - 1, i)) <= tol * scale;
    if (ok) ok = std::abs(tail * es.eigenvectors()(m - 1, m - 1)) <= tol * scale;
    if (!ok) return false;
    out.bottom.assign(es.eigenvalues().data(), es.eigenvalues().data() + nb);
    out.bottom_vectors.assign(nb, std::vector<double>(n, 0.0));
    for (int i = 0; i < nb; ++i)
      for (int k = 0; k < m; ++k)
        axpy(es.eigenvectors()(k, i), V[k], out.bottom_vectors[i]);
    out.top = es.eigenvalues()[m - 1];
    out.iterations = m;
    out.converged = true;
    return true;
  };

  for (int j = 0; j < m_cap; ++j) {
    std::vector<double> w = kernels::apply(A, V.back());
    if (j > 0) axpy(-beta.back(), V[j - 1], w);
    const double a = dot(V.back(), w);
    alpha.push_back(a);
    axpy(-a, V.back(), w);
    orthogonalise(w, shield);
    orthogonalise(w, V);
    const double b = nrm2(w);
    if (b < 1e-12) {
      // The Krylov space closed early: the tridiagonal spectrum is exact on
      // the invariant subspace found, so the residual vanishes.
      finalise(0.0);
      return out;
    }
    const bool at_checkpoint = (j + 1) % 25 == 0 || j + 1 == m_cap;
    if (at_checkpoint && finalise(b)) return out;
    if (j + 1 < m_cap) {
      beta.push_back(b);
      for (double& x : w) x /= b;
      V.push_back(std::move(w));
    }
  }
  finalise(0.0);  // fill in the best available estimates ...
  out.converged = false;  // ... but do not pretend the residual test passed
  return out;
}

}  // namespace coarset::eigs
