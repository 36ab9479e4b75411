#pragma once

#include "mdlab/bohr.hpp"
#include "mdlab/flows.hpp"
#include "mdlab/lattice3.hpp"
#include "mdlab/real.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace mdlab {

// Sorted, disjoint closed intervals. Touching intervals are merged.
class IntervalSet {
public:
  IntervalSet() = default;
  // Normalizes: drops empty parts, sorts, merges overlaps.
  explicit IntervalSet(std::vector<Interval> parts);

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  std::size_t size() const { return parts_.size(); }

  Real measure() const;
  bool contains(const Real& x) const;

  friend IntervalSet unite(const IntervalSet& a, const IntervalSet& b);
  friend IntervalSet intersect(const IntervalSet& a, const IntervalSet& b);

private:
  std::vector<Interval> parts_;
};

Real length(const Interval& I);
// Measure of I cap S.
Real overlap(const Interval& I, const IntervalSet& S);

struct GridR {
  Real c1;
  Real c2;
  long s_max = 0;
  std::vector<std::pair<long, long>> members;  // (t, s), sorted by s then t
};

// (t, s) with 1 <= s <= s_max, t >= 1 and c1 s <= t <= c2 s, decided exactly.
GridR grid_R(const Real& c1, const Real& c2, long s_max);

struct BEpsResult {
  IntervalSet set;
  Real step;
  long samples = 0;
  bool approximate = true;
};

// Scan of J at step resolution_factor * e^{-2s-t}; a sample fails when the shortest
// vector of a(t,s)u(phi(x)) has sup-norm <= eps (s+t)^{-2/3}. Failing samples become
// cells of width step, clipped to J and merged.
BEpsResult build_B_eps(long t, long s, const Real& eps, const Interval& J, const Line& line,
                       const Real& resolution_factor = Real::rational(1, 8));

struct BStarParams {
  long t = 0;
  long s = 0;
  Real eps = Real::rational(1, 2);
  Interval J{Real(0), Real(1)};
  Line line;
  // Reports with s + t < T1 are empty. Negative selects the automatic rule:
  // empty unless s* > 0 and e^{-2s*-t*} < |J| / 10.
  long T1 = -1;
  // Up to this many subintervals every one is evaluated; above it `samples`
  // subintervals at positions frac((j + 1/2) alpha), alpha the golden section.
  long exhaustive_cap = 1L << 15;
  long samples = 256;
};

struct BStarCell {
  Integer index;
  BigFloat x0;
  IVec3 coeffs;
  BVec3 v;
  BigFloat norm;
  Real r_star;
  Real x1;
  Interval I1;  // clipped to J
  bool clipped = false;
};

struct BStarReport {
  BStarParams params;
  long kappa = 0;
  long t_star = 0;
  long s_star = 0;
  bool empty = true;
  std::string empty_reason;
  Integer subintervals;
  long evaluated = 0;
  long case_i = 0;
  bool exhaustive = true;
  Real theta;           // eps^3 (s+t)^{-2}
  BigFloat h;           // e^{-2s*-t*}
  Rational half_width;  // theta * h at working precision
  std::vector<BStarCell> cells;  // case (i) cells, in index order
  IntervalSet intervals;         // union of the emitted I1
  Real measure;                  // exact when exhaustive, sampled estimate otherwise
  BigFloat max_norm;             // largest Minkowski vector norm seen
  long minkowski_violations = 0;
  unsigned precision = 0;

  double fraction() const { return evaluated ? static_cast<double>(case_i) / evaluated : 0.0; }
};

long bstar_kappa(long t, long s, const Real& eps);

BStarReport build_B_star(const BStarParams& params);

// Case (i) cell for subinterval `index` of the report's partition, if any.
std::optional<BStarCell> bstar_cell(const BStarReport& report, const Integer& index);

struct RecheckStats {
  long points = 0;
  long fail_eps = 0;    // norm > eps (s+t)^{-2/3}
  long fail_kappa = 0;  // norm > e^{-kappa}
  BigFloat max_scaled;  // max of norm / (eps (s+t)^{-2/3})
};

// Evaluates a(t,s)u(phi(x)) a at `points` equally spaced x in every emitted I1.
RecheckStats bstar_recheck(const BStarReport& report, int points = 5);

// (2s'+t') - (2s+t) >= c3 (2s+t) with c3 = (c2 - c1)/4, ordered so that 2s+t is the smaller.
bool is_noncritical(long t, long s, long t2, long s2, const Real& c1, const Real& c2);

struct PairwiseOptions {
  long outer_max = 16;  // outer intervals used by the nested estimator
  long inner_max = 8;   // inner subintervals evaluated per outer interval
};

struct PairwiseResult {
  Real ratio;
  bool exact = false;
  BigFloat intersection;  // |B* cap B*'| (estimate unless exact)
};

// |B* cap B*'| |J| / (|B*| |B*'|). Exact set intersection when both reports are
// exhaustive; otherwise the density of the finer set inside sampled intervals of the
// coarser one, divided by its density in J.
PairwiseResult pairwise_ratio(const BStarReport& r1, const BStarReport& r2, const Interval& J,
                              const PairwiseOptions& opt = {});

struct ObservableSpec {
  enum class Kind { constant, cusp_indicator, capped_delta, norm_power };
  Kind kind = Kind::constant;
  Real param;  // theta, cap M, or exponent p

  static ObservableSpec constant() { return {}; }
  static ObservableSpec cusp(const Real& theta) { return {Kind::cusp_indicator, theta}; }
  static ObservableSpec capped(const Real& M) { return {Kind::capped_delta, M}; }
  static ObservableSpec power(const Real& p) { return {Kind::norm_power, p}; }

  BigFloat operator()(const BigFloat& shortest_norm) const;
  std::string id() const;
};

// Shortest-vector norms of a(t,s)u(phi(x)), one sample per cell of J split into n equal
// cells, at offset frac((i+1) alpha) inside cell i (alpha the golden section).
std::vector<BigFloat> orbit_shortest_norms(const Real& t, const Real& s, const Interval& J, const Line& line,
                                           long n_samples);

// Riemann sum for (1/|J|) int_J F(a(t,s)u(phi(x))) dx over those samples.
Real orbit_average(const ObservableSpec& obs, const Real& t, const Real& s, const Interval& J, const Line& line,
                   long n_samples);

struct LoglawRow {
  BigFloat norm;     // |t|, euclidean
  BigFloat ratio;    // Delta / log|t|
  BigFloat running;  // running sup
};

struct LoglawResult {
  BigFloat sup_ratio;
  Real t1, t2;             // argmax
  BigFloat covered_radius;  // grid covers e <= |t| <= covered_radius
  std::vector<LoglawRow> trace;
};

// Sup of Delta(a(t1,t2)u(phi(x))Z^3)/log|t| over grid points (i,j)*grid_step in the
// closed quadrant with e <= |t| <= min(R, cover_cap). A cap below R makes the
// result a lower bound for the sup up to R.
LoglawResult loglaw_excursion(const Real& x, const Line& line, const Real& R, const Real& grid_step,
                              const std::optional<Real>& cover_cap = std::nullopt);

// Delta(a(-t,1)u(phi(x))Z^3).
BigFloat anti_quadrant_delta(const Real& x, const Line& line, const Real& t);

struct AntiQuadrantFit {
  BigFloat C;  // max over t of t - Delta
  std::vector<std::pair<Real, BigFloat>> rows;
};

AntiQuadrantFit anti_quadrant_fit(const Real& x, const Line& line, const std::vector<Real>& ts);

struct PairRow {
  long t, s, t2, s2;
  Real ratio;
  bool noncritical;
  bool exact;
};

struct EquidistRow {
  Real t;
  Real s;
  Real average;
  std::string observable;
};

void write_bstar_csv(std::ostream& out, const std::vector<BStarReport>& reports);
void write_pairwise_csv(std::ostream& out, const std::vector<PairRow>& rows);
void write_loglaw_csv(std::ostream& out, const std::vector<LoglawRow>& rows);
void write_equidist_csv(std::ostream& out, const std::vector<EquidistRow>& rows);

}  // namespace mdlab
