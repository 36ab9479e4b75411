#pragma once

#include "mdlab/dynlab.hpp"
#include "oracles/brute_lattice.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace oracle {

using namespace mdlab;

// Membership by checking every part.
inline bool in_parts(const std::vector<Interval>& parts, const Rational& x) {
  for (const auto& I : parts)
    if (I.lo <= Real(x) && Real(x) <= I.hi) return true;
  return false;
}

// c1 = n1/d1, c2 = n2/d2.
inline std::vector<std::pair<long, long>> grid(long n1, long d1, long n2, long d2, long s_max) {
  std::vector<std::pair<long, long>> out;
  for (long s = 1; s <= s_max; ++s)
    for (long t = 1; t <= s; ++t)
      if (t * d1 >= n1 * s && t * d2 <= n2 * s) out.push_back({t, s});
  return out;
}

struct CellOracle {
  BigFloat norm;
  bool case_i = false;
  BigFloat r_star;
  BigFloat x1;
};

// Subinterval j of the B* partition recomputed from scratch with the c3 scan.
inline CellOracle bstar_cell(const BStarReport& r, long j) {
  const auto& p = r.params;
  BigFloat h = exp(BigFloat(-(2 * r.s_star + r.t_star)));
  BigFloat x0 = p.J.lo.to_bigfloat() + BigFloat(2 * j + 1) * h;
  BigFloat et = exp(BigFloat(r.t_star)), es = exp(BigFloat(r.s_star));
  Mat3<BigFloat> g = Mat3<BigFloat>::zero();
  g(0, 0) = et;
  g(0, 2) = et * (p.line.a.to_bigfloat() * x0 + p.line.b.to_bigfloat());
  g(1, 1) = es;
  g(1, 2) = es * x0;
  g(2, 2) = BigFloat(1L) / (et * es);
  long c3max = static_cast<long>(std::exp(static_cast<double>(r.t_star + r.s_star))) + 1;
  ShortVecResult sv = orbit_shortest_scan(Lattice3{g, ""}, c3max);
  CellOracle out;
  out.norm = sv.norm;
  if (abs(sv.vector[2]) >= BigFloat(Rational(1, 2))) {
    out.case_i = true;
    out.r_star = -sv.vector[1] / sv.vector[2];
    out.x1 = x0 + out.r_star * h;
  }
  return out;
}

}  // namespace oracle
