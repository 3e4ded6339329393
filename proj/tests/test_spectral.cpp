#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"

#include "coarset/eigs.hpp"
#include "coarset/kernels.hpp"
#include "coarset/spectral.hpp"
#include "support/random_instances.hpp"

using namespace coarset;

namespace {

double cycle_gap(int n) { return 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi / n); }

SparseMatrix<long long> int_laplacian_oracle(const CoarseSpace& X, const ControlledSet& E) {
  // Straight from the definition: symmetrise, drop the diagonal, count rows.
  const auto edges = E.symmetrized().off_diagonal();
  std::vector<SparseMatrix<long long>::Triplet> trips;
  std::vector<long long> deg(X.num_points(), 0);
  for (const auto& [x, y] : edges.pairs()) {
    trips.push_back({x, y, -1});
    ++deg[x];
  }
  for (int x = 0; x < X.num_points(); ++x)
    if (deg[x]) trips.push_back({x, x, deg[x]});
  return SparseMatrix<long long>(X.num_points(), X.num_points(), std::move(trips));
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("laplacian matrix matches the definition") {
    testsupport::Rng rng(61);
    for (int i = 0; i < 30; ++i) {
      const auto X = testsupport::random_multi_space(rng, 1 + rng.below(3), 12, 8);
      const auto E = testsupport::random_symmetric_set(rng, X, 2 * X.num_points(), rng.unit() < 0.5);
      const auto L = laplacian(X, E);
      CHECK(L.matrix == int_laplacian_oracle(X, E));
      // Row sums vanish.
      std::vector<long long> row(X.num_points(), 0);
      for (const auto& t : L.matrix.entries()) row[t.row] += t.value;
      for (long long r : row) CHECK(r == 0);
      CHECK(L.matrix == L.matrix.transpose());
    }
  }

  TEST_CASE("laplacian refuses cross-component pairs") {
    const auto X = disjoint_union({make_path(2), make_path(2)});
    CHECK_THROWS_AS(laplacian(X, ControlledSet(4, {{1, 2}, {2, 1}})), std::domain_error);
  }

  TEST_CASE("elementary laplacian identity, exact integers") {
    testsupport::Rng rng(62);
    for (int i = 0; i < 50; ++i) {
      const int u = 4 + rng.below(30);
      auto t = testsupport::random_fpf_translation(rng, u, 1 + rng.below(u - 1));
      // Make it antisymmetric by keeping one antisymmetric piece.
      const auto pieces = split_antisymmetric(t);
      t = pieces.front();
      const auto direct = elementary_laplacian(t);
      const auto v = int_matrix(t);
      const auto vt = v.transpose();
      using kernels::matmul_serial;
      const auto expect = subtract(subtract(add(matmul_serial(v, vt), matmul_serial(vt, v)), v), vt);
      CHECK(direct == expect);
    }
  }

  TEST_CASE("laplacian sum decomposition is integer-exact") {
    testsupport::Rng rng(63);
    for (int i = 0; i < 40; ++i) {
      const auto X = testsupport::random_connected_space(rng, 6 + rng.below(25), 15);
      const auto F = X.gen();
      // E: a symmetric subset of F.
      std::vector<std::pair<int, int>> keep;
      for (const auto& [x, y] : F.pairs())
        if (x <= y && rng.unit() < 0.4) {
          keep.emplace_back(x, y);
          keep.emplace_back(y, x);
        }
      const ControlledSet E(X.num_points(), std::move(keep));
      const auto split = laplacian_sum_decomposition(X, F, E);
      auto sum = split.base.matrix;
      for (const auto& piece : split.piece_laplacians) sum = add(sum, piece);
      CHECK(sum == split.total.matrix);
      for (const auto& piece : split.pieces) CHECK(piece.antisymmetric());
    }
  }

  TEST_CASE("cycle spectra match the closed form") {
    for (int n : {4, 8, 16, 64}) {
      const auto X = make_cycle(n);
      const auto rep = spectrum(laplacian(X, X.gen()));
      REQUIRE(rep.components.size() == 1);
      const auto& c = rep.components[0];
      CHECK(c.complete);
      CHECK(c.kernel_dim == 1);
      CHECK(c.gap == doctest::Approx(cycle_gap(n)).epsilon(1e-9));
      CHECK(c.lambda_max <= 4.0 + 1e-9);
      CHECK(rep.min_gap == doctest::Approx(cycle_gap(n)).epsilon(1e-9));
    }
  }

  TEST_CASE("complete graph spectra are {0, n^(n-1 times)}") {
    for (int n : {2, 3, 8, 20}) {
      const auto X = make_complete(n);
      const auto rep = spectrum(laplacian(X, X.gen()));
      const auto& c = rep.components[0];
      REQUIRE(static_cast<int>(c.eigenvalues.size()) == n);
      CHECK(c.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
      for (int i = 1; i < n; ++i)
        CHECK(c.eigenvalues[i] == doctest::Approx(static_cast<double>(n)).epsilon(1e-9));
    }
  }

  TEST_CASE("iterative path agrees with the dense path") {
    testsupport::Rng rng(64);
    const auto X = testsupport::random_connected_space(rng, 150, 220);
    const auto L = laplacian(X, X.gen());
    const auto dense = spectrum(L, 4096, 5);
    const auto iter = spectrum(L, 64, 5);  // forces the Krylov route
    REQUIRE(dense.components.size() == 1);
    REQUIRE(iter.components.size() == 1);
    CHECK(dense.components[0].complete);
    CHECK(!iter.components[0].complete);
    CHECK(iter.components[0].gap == doctest::Approx(dense.components[0].gap).epsilon(1e-7));
    CHECK(iter.components[0].lambda_max ==
          doctest::Approx(dense.components[0].lambda_max).epsilon(1e-7));
    CHECK(iter.components[0].kernel_dim == 1);
  }

  TEST_CASE("per-component reporting on a union") {
    const auto X = disjoint_union({make_cycle(4), make_complete(5)});
    const auto rep = spectrum(laplacian(X, X.gen()));
    REQUIRE(rep.components.size() == 2);
    CHECK(rep.components[0].gap == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(rep.components[1].gap == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(rep.min_gap == doctest::Approx(2.0).epsilon(1e-9));
  }

  TEST_CASE("zero threshold scales with the spectral radius") {
    CHECK(zero_threshold(1.0) == doctest::Approx(1e-8));
    CHECK(zero_threshold(0.5) == doctest::Approx(1e-8));
    CHECK(zero_threshold(100.0) == doctest::Approx(1e-6));
  }

  TEST_CASE("kernel_is_constants accepts generating sets") {
    testsupport::Rng rng(65);
    for (int i = 0; i < 10; ++i) {
      const auto X = testsupport::random_connected_space(rng, 5 + rng.below(40), 20);
      const auto kc = kernel_is_constants(X, X.gen(), 1e-8);
      CHECK(kc.ok);
      CHECK(kc.kernel_dim == 1);
      CHECK(kc.expected == 1);
      CHECK(kc.max_deviation <= 1e-8);
    }
  }

  TEST_CASE("kernel dimension counts components") {
    testsupport::Rng rng(66);
    const auto X = testsupport::random_multi_space(rng, 4, 12, 10);
    const auto kc = kernel_is_constants(X, X.gen(), 1e-8);
    CHECK(kc.ok);
    CHECK(kc.kernel_dim == 4);
    CHECK(kc.expected == 4);
  }

  TEST_CASE("kernel_is_constants refuses non-generating sets") {
    const auto X = make_cycle(6);
    const ControlledSet E(6, {{0, 1}, {1, 0}});  // misses most of the cycle
    CHECK_THROWS_AS(kernel_is_constants(X, E, 1e-8), std::domain_error);
  }

  TEST_CASE("expander verdict on growing cycles fails the gap bound") {
    const auto verdict = expander_verdict({make_cycle(4), make_cycle(8), make_cycle(32)}, 0.1);
    CHECK(verdict.sizes_increasing);
    CHECK(!verdict.gap_at_least_c);
    CHECK(!verdict.expander_evidence);
    CHECK(verdict.failing == "spectral gap below the requested bound");
    CHECK(verdict.max_degree == 2);
  }

  TEST_CASE("expander verdict flags non-increasing sizes") {
    const auto verdict = expander_verdict({make_cycle(8), make_cycle(4)}, 0.01);
    CHECK(!verdict.sizes_increasing);
    CHECK(verdict.failing == "sizes not strictly increasing");
  }

  TEST_CASE("expander verdict accepts complete graphs for small c") {
    const auto verdict =
        expander_verdict({make_complete(4), make_complete(5), make_complete(6)}, 1.0);
    CHECK(verdict.expander_evidence);
    CHECK(verdict.failing.empty());
    CHECK(verdict.min_gap == doctest::Approx(4.0).epsilon(1e-9));
  }

  TEST_CASE("expander verdict wants single-component members") {
    CHECK_THROWS_AS(expander_verdict({disjoint_union({make_cycle(3), make_cycle(4)})}, 0.1),
                    std::invalid_argument);
  }

  TEST_CASE("cheeger is exact on small graphs") {
    // C8: best cut is an arc of 4, two boundary edges: 2/4.
    const auto c8 = cheeger(make_cycle(8), 0);
    CHECK(c8.exact);
    CHECK(c8.value == doctest::Approx(0.5));
    CHECK(c8.subset.size() == 4);
    // K5: any split of size 2 cuts 2·3 = 6 edges: 6/2 = 3.
    const auto k5 = cheeger(make_complete(5), 0);
    CHECK(k5.exact);
    CHECK(k5.value == doctest::Approx(3.0));
  }

  TEST_CASE("cheeger sweep bounds the exact value on larger cycles") {
    // Above 24 points the sweep takes over; on cycles it still finds an arc.
    const auto est = cheeger(make_cycle(40), 0);
    CHECK(!est.exact);
    CHECK(est.value == doctest::Approx(4.0 / 40.0));
  }

  TEST_CASE("dense eigensolver baseline") {
    SparseMatrix<double> A(3, 3, {{0, 0, 2.0}, {1, 1, 5.0}, {2, 2, -1.0}});
    const auto r = eigs::dense_spectrum(A, false);
    REQUIRE(r.eigenvalues.size() == 3);
    CHECK(r.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(r.eigenvalues[2] == doctest::Approx(5.0));
  }

  TEST_CASE("krylov extremes match dense on a random laplacian") {
    testsupport::Rng rng(67);
    const auto X = testsupport::random_connected_space(rng, 80, 120);
    const auto L = laplacian(X, X.gen());
    SparseMatrix<double> Ad(
        L.matrix.rows(), L.matrix.cols(), [&] {
          std::vector<SparseMatrix<double>::Triplet> ts;
          for (const auto& t : L.matrix.entries())
            ts.push_back({t.row, t.col, static_cast<double>(t.value)});
          return ts;
        }());
    const auto dense = eigs::dense_spectrum(Ad, false);
    // Deflate the known kernel (constants) so the bottom Ritz value is λ₂.
    std::vector<std::vector<double>> deflate{std::vector<double>(80, 1.0)};
    const auto lr = eigs::lanczos_extremes(Ad, deflate, 2, 400, 9);
    REQUIRE(lr.converged);
    REQUIRE(lr.bottom.size() >= 1);
    CHECK(lr.bottom[0] == doctest::Approx(dense.eigenvalues[1]).epsilon(1e-8));
    CHECK(lr.top == doctest::Approx(dense.eigenvalues.back()).epsilon(1e-8));
  }
}
