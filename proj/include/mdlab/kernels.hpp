#pragma once

// Hot loops in two flavours: an OpenMP version used by the library and a serial
// reference with identical output, kept for tests and the benchmark.

#include "mdlab/bigfloat.hpp"
#include "mdlab/ddouble.hpp"
#include "mdlab/lattice3.hpp"
#include "mdlab/real.hpp"

#include <array>
#include <vector>

namespace mdlab::kernels {


DD to_dd(const Real& x);
DD to_dd(const BigFloat& x);

// <n x> for |n| < 2^50; absolute error about |n| 2^-106.
double frac_dist_dd(const DD& x, long n);
// <x a + y b>, same accuracy.
double frac_dist_dd2(const DD& a, long x, const DD& b, long y);

// Threads used by the parallel kernels; 0 means the OpenMP default.
int threads();
void set_threads(int n);

// n in [n0, n1] whose approximate value n (log n)^2 <n a><n b> is within a factor
// (1 + slack) of the running minimum of its chunk, or whose factors are too small
// for the double estimate to be trusted. Every exact running minimum is included.
std::vector<long> gallagher_candidates_serial(const DD& a, const DD& b, long n0, long n1, double slack);
std::vector<long> gallagher_candidates_omp(const DD& a, const DD& b, long n0, long n1, double slack);

// Rows (p2, q) with |p2|, |q| <= Q and every p1 with |p2 a + q b - p1| <= delta, in
// lexicographic order. Values are decided in big-float at the caller's precision.
using Triple = std::array<long, 3>;
std::vector<Triple> bohr_members_serial(const Real& a, const Real& b, long Q, const Real& delta);
std::vector<Triple> bohr_members_omp(const Real& a, const Real& b, long Q, const Real& delta);

// Sup-norm shortest vector of each lattice in the batch.
std::vector<ShortVecResult> shortest_batch_serial(const std::vector<Lattice3>& lattices);
std::vector<ShortVecResult> shortest_batch_omp(const std::vector<Lattice3>& lattices);

}  // namespace mdlab::kernels
