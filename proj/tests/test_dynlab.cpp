#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mdlab/dynlab.hpp"
#include "mdlab/errors.hpp"
#include "oracles/brute_dynlab.hpp"

#include <cmath>
#include <random>
#include <set>
#include <sstream>

using namespace mdlab;

namespace {

const Line line23{Real::sqrt_of(2), Real::sqrt_of(3)};
const Interval unit{Real(0), Real(1)};

std::vector<Interval> random_parts(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<long> pos(0, 40), len(0, 6);
  std::vector<Interval> v;
  for (int i = 0; i < n; ++i) {
    long a = pos(rng);
    v.push_back({Real::rational(a, 8), Real::rational(a + len(rng), 8)});
  }
  return v;
}

}  // namespace

TEST_CASE("IntervalSet algebra") {
  IntervalSet a({{Real(0), Real(2)}, {Real(1), Real(3)}, {Real(5), Real(4)}});
  REQUIRE(a.size() == 1);
  CHECK(a.measure() == Real(3));
  CHECK(IntervalSet({{Real(0), Real(1)}, {Real(1), Real(2)}}).size() == 1);
  CHECK(intersect(a, IntervalSet({{Real(3), Real(9)}})).measure() == Real(0));

  std::mt19937_64 rng(7);
  long bad = 0;
  for (int k = 0; k < 10000; ++k) {
    auto pa = random_parts(rng, 1 + k % 5), pb = random_parts(rng, 1 + (k / 5) % 5);
    IntervalSet A(pa), B(pb);
    Real lhs = unite(A, B).measure() + intersect(A, B).measure();
    if (lhs != A.measure() + B.measure()) ++bad;
    if (k % 100 == 0) {
      // pointwise against the raw families, on a grid finer than the endpoints
      IntervalSet U = unite(A, B), I = intersect(A, B);
      for (long q = -2; q <= 2 * 8 * 50; ++q) {
        Rational x(q, 16);
        bool ia = oracle::in_parts(pa, x), ib = oracle::in_parts(pb, x);
        if (U.contains(Real(x)) != (ia || ib) || I.contains(Real(x)) != (ia && ib)) ++bad;
      }
    }
  }
  CHECK(bad == 0);
}

TEST_CASE("grid_R") {
  auto g = grid_R(Real::rational(2, 5), Real::rational(1, 2), 10);
  CHECK(g.members == oracle::grid(2, 5, 1, 2, 10));
  std::set<std::pair<long, long>> all(g.members.begin(), g.members.end());
  for (auto p : {std::pair{2L, 5L}, {2L, 4L}, {4L, 8L}, {4L, 10L}, {5L, 10L}, {3L, 6L}, {3L, 7L}})
    CHECK(all.count(p) == 1);
  CHECK(grid_R(Real::rational(1, 100), Real::rational(1, 20), 10).members.empty());
  auto g2 = grid_R(Real::rational(2, 5), Real::rational(9, 20), 40);
  CHECK(g2.members == oracle::grid(2, 5, 9, 20, 40));
  for (auto [t, s] : g2.members) {
    CHECK(Real(t) >= Real::rational(2, 5) * Real(s));
    CHECK(Real(t) <= Real::rational(9, 20) * Real(s));
  }
  CHECK_THROWS_AS(grid_R(Real(1), Real(1), 3), DomainError);
}

TEST_CASE("kappa and report invariants") {
  CHECK(bstar_kappa(2, 5, Real::rational(1, 2)) == 1);   // (2/3) log 7 + log 2 = 1.99
  CHECK(bstar_kappa(3, 7, Real::rational(1, 2)) == 2);   // 2.23
  CHECK(bstar_kappa(17, 40, Real::rational(1, 2)) == 3);  // 3.39

  BStarParams p{2, 5, Real::rational(1, 2), unit, line23};
  BStarReport r = build_B_star(p);
  REQUIRE_FALSE(r.empty);
  CHECK(r.t_star == 3);
  CHECK(r.s_star == 3);
  CHECK(r.exhaustive);
  CHECK(r.theta == Real::rational(1, 392));
  CHECK(r.evaluated == r.subintervals.get_si());
  CHECK(r.minkowski_violations == 0);
  CHECK(r.case_i > 0);
  BigFloat hw = BigFloat(Rational(1, 392)) * exp(BigFloat(-9L));
  CHECK(abs(BigFloat(r.half_width) - hw) <= hw * ldexp(BigFloat(1L), -150));
  for (const auto& c : r.cells) {
    CHECK(abs(c.r_star.to_bigfloat()) <= BigFloat(2L));
    if (!c.clipped) CHECK(c.I1.hi - c.I1.lo == Real(Rational(2 * r.half_width)));
  }
  // the union measure equals the sum when no two cells overlap
  BStarReport again = build_B_star(p);
  CHECK(again.cells.size() == r.cells.size());
  CHECK(again.measure == r.measure);
  CHECK(again.intervals.parts().size() == r.intervals.parts().size());

  BStarReport tiny = build_B_star({1, 2, Real::rational(1, 2), unit, line23});
  CHECK(tiny.empty);
  CHECK(tiny.measure == Real(0));
}

TEST_CASE("cells match the c3 scan") {
  for (auto [t, s] : {std::pair{2L, 5L}, std::pair{3L, 7L}}) {
    BStarReport r = build_B_star({t, s, Real::rational(1, 2), unit, line23});
    ScopedPrecision prec(r.precision);
    long K = r.subintervals.get_si(), mismatch = 0, checked = 0;
    for (long j = 0; j < K; j += std::max(1L, K / 100)) {
      auto fast = bstar_cell(r, Integer(j));
      auto slow = oracle::bstar_cell(r, j);
      ++checked;
      if (fast.has_value() != slow.case_i) {
        ++mismatch;
        continue;
      }
      if (fast && abs(fast->x1.to_bigfloat() - slow.x1) > ldexp(BigFloat(1L), -100)) ++mismatch;
    }
    MESSAGE("(t,s)=(" << t << "," << s << ") cells checked " << checked << ", case (i) fraction " << r.fraction());
    CHECK(mismatch == 0);
  }
}

TEST_CASE("B* inside B_eps") {
  // eps with (2/3) log l - log eps just above an integer, so e^{-kappa} = eps l^{-2/3}
  const long t = 10, s = 25;
  Real eps(pow(BigFloat(35L), BigFloat(Rational(2, 3))) * exp(BigFloat(-3L)) * (BigFloat(1L) - BigFloat(1e-20)));
  BStarParams p{t, s, eps, unit, line23};
  p.samples = 128;
  BStarReport r = build_B_star(p);
  REQUIRE(r.kappa == 3);
  REQUIRE(r.cells.size() > 10);
  ScopedPrecision prec(r.precision);
  BigFloat thr = eps.to_bigfloat() * pow(BigFloat(35L), BigFloat(Rational(-2, 3)));
  long fails = 0;
  for (std::size_t k = 0; k < r.cells.size(); k += 4) {
    const auto& c = r.cells[k];
    for (int i = 0; i < 5; ++i) {
      BigFloat x = (c.I1.lo + (c.I1.hi - c.I1.lo) * Real::rational(i, 4)).to_bigfloat();
      Lattice3 L{orbit_basis(exp(BigFloat(t)), exp(BigFloat(s)), line23.f(x), x), ""};
      if (sup_shortest_vector(L).norm > thr) ++fails;
    }
  }
  CHECK(fails == 0);
  auto st = bstar_recheck(r);
  CHECK(st.fail_eps == 0);
  CHECK(st.fail_kappa == 0);

  // scanned B_eps around a few intervals covers them up to one scan step
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& c = r.cells[k * r.cells.size() / 3];
    Real pad = (c.I1.hi - c.I1.lo) * Real(2);
    Interval Jl{c.I1.lo - pad, c.I1.hi + pad};
    auto scan = build_B_eps(t, s, eps, Jl, line23);
    Real covered = overlap(c.I1, scan.set);
    CHECK(covered.to_bigfloat() >= length(c.I1).to_bigfloat() - BigFloat(2L) * scan.step.to_bigfloat());
  }

  // with eps = 1/2 the floor in kappa leaves part of I1 above eps l^{-2/3}
  BStarParams q{17, 40, Real::rational(1, 2), unit, line23};
  q.samples = 128;
  auto half = bstar_recheck(build_B_star(q));
  MESSAGE("eps = 1/2 at (17,40): " << half.fail_eps << " of " << half.points << " points above eps l^{-2/3}, "
                                   << half.fail_kappa << " above e^{-kappa}");
  CHECK(half.fail_kappa == 0);
}

TEST_CASE("build_B_eps") {
  Real hi = Real::rational(99, 100);
  auto coarse = build_B_eps(1, 2, hi, unit, line23, Real::rational(1, 4));
  auto fine = build_B_eps(1, 2, hi, unit, line23, Real::rational(1, 16));
  CHECK(coarse.approximate);
  double m = coarse.set.measure().to_double(), mf = fine.set.measure().to_double();
  MESSAGE("B_eps(1,2) at eps 0.99: " << m << " (4x finer: " << mf << ")");
  double tol = 2.0 * static_cast<double>(coarse.set.size() + 1) * coarse.step.to_double();
  CHECK(std::fabs(m - mf) <= tol);
  CHECK(m > 0.1);

  double prev = 2.0;
  for (auto e : {Real::rational(9, 10), Real::rational(7, 10), Real::rational(1, 2), Real::rational(3, 10)}) {
    double v = build_B_eps(1, 2, e, unit, line23, Real::rational(1, 4)).set.measure().to_double();
    CHECK(v <= prev);
    prev = v;
  }
  CHECK_THROWS_AS(build_B_eps(1, 2, hi, unit, line23, Real::rational(1, 2)), DomainError);
  double saved = budget_cells();
  set_budget_cells(10);
  CHECK_THROWS_AS(build_B_eps(1, 2, hi, unit, line23), BudgetError);
  set_budget_cells(saved);
}

TEST_CASE("sampled reports") {
  BStarParams p{17, 40, Real::rational(1, 2), unit, line23};
  p.samples = 64;
  BStarReport r = build_B_star(p);
  REQUIRE_FALSE(r.empty);
  CHECK_FALSE(r.exhaustive);
  CHECK(r.evaluated == 64);
  CHECK(r.kappa == 3);
  CHECK(r.measure.sign() > 0);
  CHECK(r.minkowski_violations == 0);
  BStarReport again = build_B_star(p);
  CHECK(again.measure == r.measure);
  REQUIRE(again.cells.size() == r.cells.size());
  for (std::size_t i = 0; i < r.cells.size(); ++i) CHECK(again.cells[i].x1 == r.cells[i].x1);
  // sampled measure = fraction * K * 2 theta h, up to clipping
  BigFloat est = BigFloat(r.fraction()) * BigFloat(r.subintervals) * BigFloat(Rational(2 * r.half_width));
  CHECK(abs(est - r.measure.to_bigfloat()) <= est * BigFloat(1e-12));
}

TEST_CASE("pairwise_ratio") {
  BStarReport a = build_B_star({2, 5, Real::rational(1, 2), unit, line23});
  BStarReport b = build_B_star({3, 7, Real::rational(1, 2), unit, line23});
  auto self = pairwise_ratio(a, a, unit);
  CHECK(self.exact);
  CHECK(self.ratio == Real(1) / a.measure);
  CHECK(self.ratio >= Real(1));

  Interval left{Real(0), Real::rational(1, 2)}, right{Real::rational(1, 2), Real(1)};
  BStarReport l = build_B_star({2, 5, Real::rational(1, 2), left, line23});
  BStarReport rr = build_B_star({2, 5, Real::rational(1, 2), right, line23});
  CHECK(pairwise_ratio(l, rr, unit).ratio == Real(0));

  auto exact = pairwise_ratio(a, b, unit);
  REQUIRE(exact.exact);
  // the nested estimator with every interval and cell reproduces the exact value
  BStarReport bs = b;
  bs.exhaustive = false;
  auto nested = pairwise_ratio(a, bs, unit, {1000000, 1000000});
  CHECK_FALSE(nested.exact);
  MESSAGE("exact " << exact.ratio.to_double() << " nested " << nested.ratio.to_double());
  CHECK(abs(nested.ratio.to_bigfloat() - exact.ratio.to_bigfloat()) <= BigFloat(1e-20));

  CHECK(is_noncritical(2, 5, 3, 7, Real::rational(2, 5), Real::rational(9, 20)));
  CHECK_FALSE(is_noncritical(3, 7, 3, 7, Real::rational(2, 5), Real::rational(9, 20)));
  BStarReport empty = build_B_star({1, 2, Real::rational(1, 2), unit, line23});
  CHECK_THROWS_AS(pairwise_ratio(a, empty, unit), DomainError);
}

TEST_CASE("orbit averages") {
  CHECK(orbit_average(ObservableSpec::constant(), Real(4), Real(10), unit, line23, 100) == Real(1));
  auto norms = orbit_shortest_norms(Real(4), Real(10), unit, line23, 200);
  long hits = 0;
  for (const auto& n : norms) hits += n <= BigFloat(Rational(1, 2));
  Real avg = orbit_average(ObservableSpec::cusp(Real::rational(1, 2)), Real(4), Real(10), unit, line23, 200);
  CHECK(avg == Real(Rational(hits, 200)));
  // sample i sits at (i + frac((i+1) alpha)) / 200
  {
    auto small = orbit_shortest_norms(Real(3), Real(6), unit, line23, 200);
    FlowPrecision prec(3, 6);
    BigFloat g = BigFloat(4L) * (sqrt(BigFloat(5L)) - BigFloat(1L)) / BigFloat(2L);
    BigFloat x = (BigFloat(3L) + g - BigFloat(floor_to_integer(g))) / BigFloat(200L);
    Lattice3 L{orbit_basis(exp(BigFloat(3L)), exp(BigFloat(6L)), line23.f(x), x), ""};
    CHECK(oracle::orbit_shortest_scan(L, static_cast<long>(std::exp(9.0)) + 1).norm == small[3]);
  }
  CHECK_THROWS_AS(orbit_average(ObservableSpec::constant(), Real(1), Real(1), unit, line23, 99), DomainError);

  std::vector<double> avgs;
  for (long t : {4L, 6L, 8L})
    avgs.push_back(
        orbit_average(ObservableSpec::cusp(Real::rational(3, 10)), Real(t), Real(16), unit, line23, 1024).to_double());
  MESSAGE("cusp averages at s=16, t=4,6,8: " << avgs[0] << " " << avgs[1] << " " << avgs[2]);
  for (double v : avgs) CHECK(v > 0.0);

  CHECK(ObservableSpec::cusp(Real::rational(1, 10)).id() == "cusp:1/10");
  CHECK(ObservableSpec::capped(Real(3))(BigFloat(1e-5)) == BigFloat(3L));
  CHECK(ObservableSpec::power(Real(2))(BigFloat(Rational(1, 2))) == BigFloat(Rational(1, 4)));
}

TEST_CASE("log-law excursion") {
  Real x = Real::rational(1, 3);
  Real R(exp(BigFloat(Rational(5, 2))));
  auto res = loglaw_excursion(x, line23, R, Real::rational(1, 2));
  REQUIRE(!res.trace.empty());
  for (std::size_t i = 1; i < res.trace.size(); ++i) {
    CHECK(res.trace[i].running >= res.trace[i - 1].running);
    CHECK(res.trace[i].norm >= res.trace[i - 1].norm);
  }
  CHECK(res.trace.back().running == res.sup_ratio);
  BigFloat e(exp(BigFloat(1L)));
  CHECK(res.trace.front().norm >= e);
  CHECK(res.trace.back().norm <= R.to_bigfloat());
  {
    // recompute the argmax with the c3 scan
    FlowPrecision prec(12, 12);
    BigFloat xb = x.to_bigfloat();
    Lattice3 L{orbit_basis(exp(res.t1.to_bigfloat()), exp(res.t2.to_bigfloat()), line23.f(xb), xb), ""};
    double span = res.t1.to_double() + res.t2.to_double();
    BigFloat d = -log(oracle::orbit_shortest_scan(L, static_cast<long>(std::exp(span)) + 1).norm);
    BigFloat tn = sqrt(res.t1.to_bigfloat() * res.t1.to_bigfloat() + res.t2.to_bigfloat() * res.t2.to_bigfloat());
    CHECK(abs(d / log(tn) - res.sup_ratio) <= ldexp(BigFloat(1L), -100));
  }
  // a cap gives a lower bound
  auto capped = loglaw_excursion(x, line23, Real(20), Real::rational(1, 2), Real(8));
  CHECK(capped.covered_radius == BigFloat(8L));
  auto bigger = loglaw_excursion(x, line23, Real(20), Real::rational(1, 2), Real(10));
  CHECK(bigger.sup_ratio >= capped.sup_ratio);
  CHECK_THROWS_AS(loglaw_excursion(x, line23, Real(5), Real::rational(1, 2)), DomainError);

  std::vector<Real> ts;
  for (long t = 1; t <= 20; ++t) ts.push_back(Real(t));
  auto fit = anti_quadrant_fit(x, line23, ts);
  CHECK(fit.C <= BigFloat(1e-30));
  for (const auto& [t, d] : fit.rows) CHECK(d >= t.to_bigfloat() - BigFloat(1e-30));
}

TEST_CASE("csv writers") {
  std::ostringstream a, b, c;
  write_pairwise_csv(a, {{2, 5, 3, 7, Real::rational(1, 2), true, true}});
  CHECK(a.str() == "t,s,t2,s2,ratio,noncritical,exact\n2,5,3,7,0.5,true,true\n");
  write_equidist_csv(b, {{Real(10), Real(25), Real::rational(1, 4), "cusp:1/10"}});
  CHECK(b.str() == "t,s,average,observable\n10,25,0.25,cusp:1/10\n");
  write_bstar_csv(c, {});
  CHECK(c.str() == "t,s,kappa,t_star,s_star,subintervals,evaluated,fraction,measure,exhaustive\n");
}
