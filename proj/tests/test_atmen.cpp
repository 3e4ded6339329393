#include <cmath>
#include <complex>
#include <stdexcept>

#include "doctest.h"

#include "coarset/algebra.hpp"
#include "coarset/atmen.hpp"
#include "coarset/kernels.hpp"
#include "support/oracles.hpp"
#include "support/random_instances.hpp"

using namespace coarset;

namespace {

double component_average(const CoarseSpace& X, int c, const Vector& values) {
  double acc = 0.0;
  const int off = X.component_offset(c);
  for (int i = 0; i < X.component_size(c); ++i) acc += values[off + i].real();
  return acc / X.component_size(c);
}

}  // namespace

TEST_SUITE("atmen") {
  TEST_CASE("girth of the standard zoo") {
    CHECK(girth(make_cycle(5), 0) == 5);
    CHECK(girth(make_cycle(12), 0) == 12);
    CHECK(girth(make_complete(4), 0) == 3);
    CHECK(!girth(make_path(9), 0).has_value());
    CHECK(girth(testsupport::petersen(), 0) == 5);
  }

  TEST_CASE("girth matches the edge-deletion oracle on random graphs") {
    testsupport::Rng rng(91);
    for (int i = 0; i < 25; ++i) {
      const auto X = testsupport::random_connected_space(rng, 4 + rng.below(50), rng.below(30));
      CHECK(girth(X, 0) == testsupport::girth_oracle(X, 0));
    }
  }

  TEST_CASE("girths covers every component") {
    const auto X = disjoint_union({make_cycle(3), make_path(4), make_cycle(7)});
    const auto g = girths(X);
    REQUIRE(g.size() == 3);
    CHECK(g[0] == 3);
    CHECK(!g[1].has_value());
    CHECK(g[2] == 7);
  }

  TEST_CASE("distance kernel stores graph distances") {
    const auto X = make_cycle(6);
    const auto k = distance_kernel(X);
    CHECK(k.at(0, 0, 0) == 0.0);
    CHECK(k.at(0, 0, 1) == 1.0);
    CHECK(k.at(0, 0, 3) == 3.0);
    CHECK(k.at(0, 2, 5) == 3.0);
  }

  TEST_CASE("truncated kernel caps at a third of the girth") {
    const auto X = make_cycle(12);  // girth 12, cap 4
    const auto k = truncated_distance_kernel(X);
    CHECK(k.at(0, 0, 3) == 3.0);
    CHECK(k.at(0, 0, 6) == 4.0);
    // Forests keep plain distances.
    const auto P = make_path(9);
    CHECK(truncated_distance_kernel(P).at(0, 0, 8) == 8.0);
  }

  TEST_CASE("embedding kernels are seeded and reproducible") {
    const auto X = make_path(7);
    const auto a = embedding_kernel(X, 3, 42);
    const auto b = embedding_kernel(X, 3, 42);
    const auto c = embedding_kernel(X, 3, 43);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    CHECK(negative_type_check(a).ok);  // squared euclidean distances always pass
  }

  TEST_CASE("negative type: distance kernels on trees, cycles, complete graphs") {
    testsupport::Rng rng(92);
    CHECK(negative_type_check(distance_kernel(make_path(10))).ok);
    CHECK(negative_type_check(distance_kernel(make_cycle(9))).ok);
    CHECK(negative_type_check(distance_kernel(make_complete(7))).ok);
    // Random trees (no extra edges) are always fine.
    for (int i = 0; i < 10; ++i)
      CHECK(negative_type_check(distance_kernel(
                testsupport::random_connected_space(rng, 4 + rng.below(30), 0)))
                .ok);
  }

  TEST_CASE("negative type check flags structural defects") {
    const auto X = make_cycle(3);
    // Asymmetric.
    auto rep = negative_type_check(explicit_kernel(X, {{0, 1, 2, 9, 0, 1, 2, 1, 0}}));
    CHECK(!rep.ok);
    CHECK(!rep.symmetric);
    // Non-zero diagonal.
    rep = negative_type_check(explicit_kernel(X, {{1, 1, 1, 1, 1, 1, 1, 1, 1}}));
    CHECK(!rep.ok);
    CHECK(!rep.zero_diagonal);
    // Negative entry.
    rep = negative_type_check(explicit_kernel(X, {{0, -1, 1, -1, 0, 1, 1, 1, 0}}));
    CHECK(!rep.ok);
    CHECK(!rep.nonnegative);
  }

  TEST_CASE("a far-outlier kernel fails the centred-Gram test") {
    const auto X = make_cycle(3);
    // k(0,1) = k(0,2) = 1 but k(1,2) = 100: with z = (−2, 1, 1) the
    // negative-type form is positive, so the check must say no.
    const auto k = explicit_kernel(X, {{0, 1, 1, 1, 0, 100, 1, 100, 0}});
    const auto rep = negative_type_check(k);
    CHECK(!rep.ok);
    CHECK(rep.symmetric);
    CHECK(rep.min_centred_eigenvalue < -1e-6);
    CHECK_THROWS_AS(schoenberg(k, 1.0), std::domain_error);
  }

  TEST_CASE("band profile grows with the distance floor") {
    const auto X = make_path(6);
    const auto rep = negative_type_check(distance_kernel(X));
    REQUIRE(static_cast<int>(rep.band_profile.size()) == 5);
    for (int r = 1; r <= 5; ++r) CHECK(rep.band_profile[r - 1] == static_cast<double>(r));
  }

  TEST_CASE("schoenberg transforms pass the eigenvalue bar") {
    for (double t : {0.1, 1.0, 10.0}) {
      const auto res = schoenberg(distance_kernel(make_cycle(11)), t);
      CHECK(res.psd);
      CHECK(res.min_eigenvalue >= -1e-9);
      // Diagonal of the transform is exactly one.
      CHECK(res.gram[0][0] == 1.0);
    }
    CHECK_THROWS_AS(schoenberg(distance_kernel(make_cycle(4)), -2.0), std::domain_error);
  }

  TEST_CASE("annulus matching on a cycle lands in the band") {
    const auto X = make_cycle(14);
    const auto m = annulus_matching(X, 0, 2);
    CHECK(m.s_start == 3 * (5 + 2));  // ball of radius 2 holds 5 points
    const auto dist = kernels::all_pairs_distances(kernels::graph_from_space(X));
    std::vector<int> hit(14, 0);
    for (int x = 0; x < 14; ++x) {
      const int y = m.sigma[x];
      CHECK(dist[x][y] > 2);
      CHECK(dist[x][y] <= m.s);
      ++hit[y];
    }
    for (int y = 0; y < 14; ++y) CHECK(hit[y] == 1);  // a genuine permutation
  }

  TEST_CASE("annulus matching fails honestly on too-small components") {
    CHECK_THROWS_AS(annulus_matching(make_complete(4), 0, 1), std::runtime_error);
    CHECK_THROWS_AS(annulus_matching(make_path(2), 0, 1), std::runtime_error);
  }

  TEST_CASE("annulus matching at floor zero is a derangement") {
    const auto X = make_path(6);
    const auto m = annulus_matching(X, 0, 0);
    for (int x = 0; x < 6; ++x) CHECK(m.sigma[x] != x);
  }

  TEST_CASE("witness expectation: regular components, distance kernel, closed form") {
    for (double t : {0.1, 1.0, 10.0}) {
      // C9 is 2-regular.
      const double got = witness_expectation(make_cycle(9), 0, distance_kernel(make_cycle(9)), t);
      CHECK(std::abs(got - 2.0 * (1.0 - std::exp(-t))) <= 1e-12);
    }
  }

  TEST_CASE("witness expectation matches a double-loop oracle on irregular graphs") {
    testsupport::Rng rng(93);
    for (int i = 0; i < 10; ++i) {
      const auto X = testsupport::random_connected_space(rng, 5 + rng.below(20), 8);
      const auto k = distance_kernel(X);
      const double t = 0.5 + rng.unit();
      // Oracle: Σ_{xy} Δ_{xy} e^{−t·k(x,y)} / n with explicit degree terms.
      const auto& edges = X.component_edges(0);
      const int n = X.num_points();
      double acc = 0.0;
      for (const auto& [a, b] : edges) {
        acc += 2.0;  // the two diagonal contributions of this edge
        acc -= 2.0 * std::exp(-t * k.at(0, a, b));
      }
      CHECK(std::abs(witness_expectation(X, 0, k, t) - acc / n) <= 1e-10);
    }
  }

  TEST_CASE("pointwise form of the identity pair is identically one") {
    const auto X = disjoint_union({make_cycle(5), make_path(4)});
    const auto k = distance_kernel(X);
    const auto I = identity_op(X);
    const auto vals = form_evaluate(I, I, k, 0.7);
    for (const auto& v : vals) {
      CHECK(v.real() == 1.0);
      CHECK(v.imag() == 0.0);
    }
  }

  TEST_CASE("diagonal form values are nonnegative for admissible kernels") {
    testsupport::Rng rng(94);
    const auto X = make_cycle(8);
    const auto k = distance_kernel(X);
    for (int i = 0; i < 10; ++i) {
      const auto S = testsupport::random_operator(rng, X, X.gen(), 0.8);
      const auto vals = form_evaluate(S, S, k, 1.0);
      for (const auto& v : vals) {
        CHECK(v.real() >= -1e-9);
        CHECK(std::abs(v.imag()) <= 1e-12);
      }
    }
  }

  TEST_CASE("averaged form is adjoint-balanced") {
    testsupport::Rng rng(95);
    for (int i = 0; i < 10; ++i) {
      const auto X = testsupport::random_connected_space(rng, 6 + rng.below(12), 8);
      const auto k = distance_kernel(X);
      const auto R = testsupport::random_operator(rng, X, X.gen(), 0.7);
      const auto S = testsupport::random_operator(rng, X, X.gen(), 0.7);
      const auto T = testsupport::random_operator(rng, X, X.gen(), 0.7);
      const double t = 0.8;
      const auto lhs = form_evaluate(S, matmul(R, T), k, t);
      const auto rhs = form_evaluate(matmul(adjoint(R), S), T, k, t);
      CHECK(std::abs(component_average(X, 0, lhs) - component_average(X, 0, rhs)) <= 1e-10);
    }
  }

  TEST_CASE("kernels are validated against their space") {
    const auto X = make_cycle(5);
    const auto Y = make_cycle(6);
    const auto k = distance_kernel(X);
    CHECK_THROWS_AS(witness_expectation(Y, 0, k, 1.0), std::domain_error);
    CHECK_THROWS_AS(explicit_kernel(X, {{1.0, 2.0}}), std::invalid_argument);
  }
}
