#pragma once

#include "mdlab/dioph.hpp"
#include "mdlab/kernels.hpp"
#include "mdlab/lattice3.hpp"
#include "mdlab/real.hpp"

#include <array>
#include <ostream>
#include <string>
#include <vector>

namespace mdlab {

using Triple = kernels::Triple;

struct BohrParams {
  Real a;
  Real b;
  long Q = 1;
  Real delta;

  // delta < Q/1000 and delta >= c Q^{-1/2} (log Q)^{-3/2}. Recorded, never enforced.
  bool regime_ok(double c = 1.0) const;
};

// (p2, q, p1) with |p2|, |q| <= Q and |p2 a + q b - p1| <= delta, sorted, no duplicates.
struct BohrSet {
  BohrParams params;
  std::vector<Triple> members;
};

struct GapCover {
  std::array<IVec3, 3> v;
  std::array<long, 3> N{};
  BigFloat lambda;
  std::array<BigFloat, 3> minima;
  long C = 8;

  BigFloat minima_product() const { return minima[0] * minima[1] * minima[2]; }
  // (2N1+1)(2N2+1)(2N3+1).
  Integer size() const;
};

inline constexpr long kDefaultCoverC = 8;

// BudgetError when (2Q+1)^2 exceeds budget_cells().
BohrSet enumerate_bohr(const BohrParams& params);

// lambda = (delta Q^2)^{1/3}, S = lambda^{-1} B, N_i = floor(C lambda / lambda_i).
GapCover gap_cover(const BohrParams& params, long C = kDefaultCoverC);

struct Violation {
  Triple x;
  std::array<Integer, 3> n;  // coordinates in the v basis
};

struct Containment {
  bool ok = true;
  std::vector<Violation> violations;
};

// Integer coordinates by Cramer's rule, checked against |n_i| <= N_i.
Containment certify_containment(const BohrSet& B, const GapCover& P);

struct Interval {
  Real lo;
  Real hi;
};

struct NearLineCount {
  long count = 0;
  std::vector<Triple> triples;  // (q, p1, p2), only when requested
  BigFloat bridge_max;          // max |p2 a + q b - p1| over counted triples
  BigFloat bridge_bound;        // 3 (1 + |a|) 2^{|m|} sqrt(psi(2^t))
};

// Triples (q, p1, p2), 2^t <= q < 2^{t+1}, admitting beta in I with
// |a beta + b - p1/q| < 2^m w and |beta - p2/q| < 2^{-m} w, w = sqrt(2 psi(2^t)) / 2^t.
// Every counted triple is checked against the bridge bound; a failure throws.
NearLineCount count_near_line(long t, long m, const Real& a, const Real& b, const Interval& I, const PsiSpec& psi,
                              bool keep_triples = false);

struct LadderRow {
  long Q;
  Real delta;
  std::size_t bohr_size;
  Integer cover_size;
  BigFloat minima_product;
  bool contained;
  bool regime_ok;
};

// Header "Q,delta,bohr_size,cover_size,minima_product,contained,regime_ok".
void write_ladder_csv(std::ostream& out, const std::vector<LadderRow>& rows);

}  // namespace mdlab
