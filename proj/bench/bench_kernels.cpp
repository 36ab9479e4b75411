// Serial reference vs OpenMP kernels. Usage: bench_kernels [reps]
#include "mdlab/flows.hpp"
#include "mdlab/kernels.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>

using namespace mdlab;
using clk = std::chrono::steady_clock;

static double best_of(int reps, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = clk::now();
    f();
    best = std::min(best, std::chrono::duration<double>(clk::now() - t0).count());
  }
  return best;
}

static void row(const char* name, double serial, double omp, bool same) {
  std::printf("%-28s %10.4f %10.4f %8.2fx  %s\n", name, serial, omp, serial / omp, same ? "same" : "DIFFERENT");
}

int main(int argc, char** argv) {
  int reps = argc > 1 ? std::atoi(argv[1]) : 3;
  set_precision_bits(kDefaultPrecisionBits);
  std::printf("threads: %d, best of %d\n", omp_get_max_threads(), reps);
  std::printf("%-28s %10s %10s %9s\n", "kernel", "serial s", "omp s", "speedup");

  Real a = Real::sqrt_of(2), b = Real::sqrt_of(3);
  Real beta = Real::golden_ratio() - Real(1);
  kernels::DD da = kernels::to_dd(a * beta + b), db = kernels::to_dd(beta);
  {
    std::vector<long> s, p;
    double ts = best_of(reps, [&] { s = kernels::gallagher_candidates_serial(da, db, 2, 2000000, 1e-9); });
    double tp = best_of(reps, [&] { p = kernels::gallagher_candidates_omp(da, db, 2, 2000000, 1e-9); });
    row("gallagher candidates 2e6", ts, tp, s == p);
  }
  {
    Real delta = Real::rational(1, 16);
    std::vector<kernels::Triple> s, p;
    double ts = best_of(reps, [&] { s = kernels::bohr_members_serial(a, b, 512, delta); });
    double tp = best_of(reps, [&] { p = kernels::bohr_members_omp(a, b, 512, delta); });
    row("bohr members Q=512", ts, tp, s == p);
  }
  {
    FlowPrecision fp(17, 40);
    std::vector<Lattice3> batch;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    BigFloat et = exp(BigFloat(17L)), es = exp(BigFloat(40L));
    for (int i = 0; i < 256; ++i) {
      BigFloat x(u(rng));
      batch.push_back({orbit_basis(et, es, a.to_bigfloat() * x + b.to_bigfloat(), x), ""});
    }
    std::vector<ShortVecResult> s, p;
    double ts = best_of(reps, [&] { s = kernels::shortest_batch_serial(batch); });
    double tp = best_of(reps, [&] { p = kernels::shortest_batch_omp(batch); });
    bool same = s.size() == p.size();
    for (std::size_t i = 0; same && i < s.size(); ++i) same = s[i].coeffs == p[i].coeffs && s[i].norm == p[i].norm;
    row("shortest batch 256 @ (17,40)", ts, tp, same);
  }
}
