// Timing comparison of the serial reference kernels against their OpenMP
// counterparts.  Inputs are seeded, results are cross-checked for equality
// before any number is printed, and each timing is the best of three runs.

#include <chrono>
#include <complex>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "coarset/kernels.hpp"
#include "coarset/space.hpp"

using namespace coarset;
using cplx = std::complex<double>;

namespace {

template <typename F>
double best_seconds(F&& f, int reps = 3) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool equal) {
  std::printf("%-22s %10.4f s %10.4f s %8.2fx   %s\n", name, serial, parallel,
              serial / parallel, equal ? "results equal" : "MISMATCH");
}

SparseMatrix<cplx> random_sparse(std::mt19937_64& rng, int n, int per_row) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<SparseMatrix<cplx>::Triplet> trips;
  trips.reserve(static_cast<std::size_t>(n) * per_row);
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < per_row; ++k)
      trips.push_back({r, static_cast<int>(rng() % n), {val(rng), val(rng)}});
  return SparseMatrix<cplx>(n, n, std::move(trips));
}

kernels::Graph random_graph(std::mt19937_64& rng, int n, int extra) {
  std::vector<std::pair<int, int>> sym;
  for (int i = 1; i < n; ++i) {
    const int j = static_cast<int>(rng() % i);
    sym.emplace_back(i, j);
    sym.emplace_back(j, i);
  }
  for (int e = 0; e < extra; ++e) {
    const int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
    if (a == b) continue;
    sym.emplace_back(a, b);
    sym.emplace_back(b, a);
  }
  return kernels::graph_from_pairs(n, sym);
}

}  // namespace

int main() {
  std::mt19937_64 rng(20240817);
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("%-22s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    const auto A = random_sparse(rng, 3000, 24);
    const auto B = random_sparse(rng, 3000, 24);
    SparseMatrix<cplx> rs(0, 0, {}), rp(0, 0, {});
    const double ts = best_seconds([&] { rs = kernels::matmul_serial(A, B); });
    const double tp = best_seconds([&] { rp = kernels::matmul(A, B); });
    report("sparse product", ts, tp, rs == rp);
  }
  {
    const auto g = random_graph(rng, 20000, 40000);
    std::vector<std::vector<int>> rs, rp;
    const double ts = best_seconds([&] { rs = kernels::all_pairs_distances_serial(g); });
    const double tp = best_seconds([&] { rp = kernels::all_pairs_distances(g); });
    report("all-pairs distances", ts, tp, rs == rp);
  }
  {
    const auto A = random_sparse(rng, 200000, 30);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<cplx> x(200000);
    for (auto& v : x) v = {val(rng), val(rng)};
    std::vector<cplx> rs, rp;
    const double ts = best_seconds([&] {
      for (int i = 0; i < 20; ++i) rs = kernels::apply_serial(A, x);
    });
    const double tp = best_seconds([&] {
      for (int i = 0; i < 20; ++i) rp = kernels::apply(A, x);
    });
    report("matrix-vector apply", ts, tp, rs == rp);
  }
  {
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<double> values(50'000'000);
    for (auto& v : values) v = val(rng);
    double rs = 0, rp = 0;
    const double ts = best_seconds([&] { rs = kernels::chunked_sum_serial(values); });
    const double tp = best_seconds([&] { rp = kernels::chunked_sum(values); });
    report("chunked sum", ts, tp, rs == rp);
  }
  {
    const auto X = make_cycle(22);
    std::vector<std::uint32_t> nbr(22, 0);
    for (const auto& [i, j] : X.component_edges(0)) {
      nbr[i] |= 1u << j;
      nbr[j] |= 1u << i;
    }
    kernels::CheegerCut rs, rp;
    const double ts = best_seconds([&] { rs = kernels::cheeger_scan_serial(nbr); });
    const double tp = best_seconds([&] { rp = kernels::cheeger_scan(nbr); });
    report("cheeger scan", ts, tp,
           rs.subset == rp.subset && rs.cut == rp.cut && rs.value == rp.value);
  }
  return 0;
}
