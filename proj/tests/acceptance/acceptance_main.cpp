// One PASS/FAIL line per acceptance criterion. Optional arguments select criteria: acceptance 3 4
#include "mdlab/bohr.hpp"
#include "mdlab/dioph.hpp"
#include "mdlab/dynlab.hpp"
#include "mdlab/flows.hpp"
#include "oracles/brute_bohr.hpp"
#include "oracles/brute_lattice.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace mdlab;

namespace {

using clk = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string summary;
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

void note(const std::string& s) {
  std::printf("    %s\n", s.c_str());
  std::fflush(stdout);
}

double spread(const std::vector<double>& v) {
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo > 0 ? *hi / *lo : INFINITY;
}

const Line kLine{Real::sqrt_of(2), Real::sqrt_of(3)};
const Real kC1 = Real::rational(2, 5), kC2 = Real::rational(9, 20);
const Interval kJ{Real(0), Real(1)};

// Reports on grid_R(c1, c2, s_max), shared by criteria 3, 4 and 6.
std::map<std::pair<long, long>, BStarReport> g_reports;

const BStarReport& report_at(long t, long s) {
  auto it = g_reports.find({t, s});
  if (it != g_reports.end()) return it->second;
  BStarParams p;
  p.t = t;
  p.s = s;
  p.line = kLine;
  return g_reports.emplace(std::make_pair(t, s), build_B_star(p)).first->second;
}

Verdict criterion1() {
  auto t0 = clk::now();
  const Real phi = Real::golden_ratio();
  std::vector<std::pair<std::string, Line>> lines{{"(sqrt2,sqrt3)", kLine}, {"(phi,phi-1)", {phi, phi - Real(1)}}};
  int ok = 0, total = 0;
  bool prod_ok = true, ladder_ok = true;
  double pmin = INFINITY, pmax = 0, worst_b = 0, worst_p = 0;
  for (const auto& [name, line] : lines) {
    std::vector<double> nb, np;
    for (long Q : {64L, 256L, 1024L, 4096L}) {
      long r = std::lround(std::sqrt(static_cast<double>(Q)));
      Real delta = Real::rational(1, r);
      BohrParams p{line.a, line.b, Q, delta};
      BohrSet B = enumerate_bohr(p);
      GapCover P = gap_cover(p, 8);
      bool c = certify_containment(B, P).ok;
      double prod = P.minima_product().to_double();
      double dq2 = static_cast<double>(Q) * Q / r;
      nb.push_back(B.members.size() / dq2);
      np.push_back(P.size().get_d() / dq2);
      ++total;
      ok += c;
      prod_ok = prod_ok && prod >= 1.0 / 6 && prod <= 27.0 / 8;
      pmin = std::min(pmin, prod);
      pmax = std::max(pmax, prod);
      note(name + " Q=" + std::to_string(Q) + " #B=" + std::to_string(B.members.size()) + " #P=" + P.size().get_str() +
           " prod=" + fmt(prod) + (c ? " contained" : " NOT contained"));
    }
    worst_b = std::max(worst_b, spread(nb));
    worst_p = std::max(worst_p, spread(np));
    ladder_ok = ladder_ok && spread(nb) < 4 && spread(np) < 4;
  }
  double secs = std::chrono::duration<double>(clk::now() - t0).count();
  bool pass = ok == total && prod_ok && ladder_ok && secs < 60;
  return {pass, std::to_string(ok) + "/" + std::to_string(total) + " contained, minima product in [" + fmt(pmin) +
                    ", " + fmt(pmax) + "], #B/(dQ^2) spread " + fmt(worst_b, 3) + "x, #P/(dQ^2) spread " +
                    fmt(worst_p, 3) + "x, " + fmt(secs, 3) + " s (budget 60)"};
}

Verdict criterion2() {
  auto t0 = clk::now();
  PsiSpec psi = PsiSpec::closed(Real(1), Real(3));
  std::vector<double> ratios;
  long brute = 0, agree = 0;
  for (long t = 6; t <= 12; ++t)
    for (long m = -2; m <= 2; ++m) {
      bool keep = t <= 8;
      NearLineCount c = count_near_line(t, m, kLine.a, kLine.b, kJ, psi, keep);
      double scale = std::ldexp(std::sqrt(psi(1L << t).to_double()), static_cast<int>(std::labs(m) + 2 * t));
      ratios.push_back(c.count / scale);
      if (keep) {
        std::sort(c.triples.begin(), c.triples.end());
        ++brute;
        agree += c.triples == oracle::near_line(t, m, kLine.a, kLine.b, kJ, psi);
      }
    }
  double secs = std::chrono::duration<double>(clk::now() - t0).count();
  auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  bool pass = agree == brute && spread(ratios) < 4 && secs < 120;
  return {pass, "triple loop agrees on " + std::to_string(agree) + "/" + std::to_string(brute) +
                    " cells (t<=8), N/(2^|m| 4^t sqrt psi) in [" + fmt(*lo) + ", " + fmt(*hi) + "], spread " +
                    fmt(spread(ratios), 3) + "x, " + fmt(secs, 3) + " s (budget 120)"};
}

Verdict criterion3() {
  auto t0 = clk::now();
  GridR grid = grid_R(kC1, kC2, 40);
  long fail_eps = 0, fail_kappa = 0, points = 0, low_fraction = 0, width_bad = 0, widths = 0;
  double min_fraction = 1;
  for (auto [t, s] : grid.members) {
    const BStarReport& r = report_at(t, s);
    RecheckStats st = bstar_recheck(r, 5);
    fail_eps += st.fail_eps;
    fail_kappa += st.fail_kappa;
    points += st.points;
    if (s + t >= 25) {
      if (r.empty || r.fraction() <= 0.05) ++low_fraction;
      min_fraction = std::min(min_fraction, r.fraction());
    }
    if (r.empty) continue;
    Rational w = 2 * r.half_width;
    bool close;
    {
      ScopedPrecision twice(2 * r.precision);
      BigFloat want = BigFloat(2L) * r.theta.to_bigfloat() * exp(BigFloat(-(2 * r.s_star + r.t_star)));
      close = abs(BigFloat(w) - want) <= want * ldexp(BigFloat(1L), -static_cast<long>(r.precision) + 8);
    }
    for (const auto& c : r.cells) {
      if (c.clipped) continue;
      ++widths;
      if (!(close && c.I1.hi - c.I1.lo == Real(w))) ++width_bad;
    }
  }
  note("grid points " + std::to_string(grid.members.size()) + ", recheck points " + std::to_string(points) +
       ", failing e^-kappa " + std::to_string(fail_kappa));
  double secs = std::chrono::duration<double>(clk::now() - t0).count();
  bool pass = fail_eps == 0 && low_fraction == 0 && width_bad == 0 && secs < 600;
  return {pass, std::to_string(fail_eps) + "/" + std::to_string(points) +
                    " recheck points fail eps(s+t)^(-2/3), min case-(i) fraction (s+t>=25) " + fmt(min_fraction, 3) +
                    ", |I1| = 2 theta h on " + std::to_string(widths - width_bad) + "/" + std::to_string(widths) +
                    " intervals, " + fmt(secs, 3) + " s (budget 600)"};
}

Verdict criterion4() {
  auto t0 = clk::now();
  GridR grid = grid_R(kC1, kC2, 40);
  struct Pair {
    std::pair<long, long> outer, inner;
    double ratio, weight;
    long gap;
  };
  std::vector<Pair> pairs;
  const auto& pts = grid.members;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      auto a = pts[i], b = pts[j];
      if (!is_noncritical(a.first, a.second, b.first, b.second, kC1, kC2)) continue;
      const BStarReport &ra = report_at(a.first, a.second), &rb = report_at(b.first, b.second);
      if (ra.empty || rb.empty || ra.measure.is_zero() || rb.measure.is_zero()) continue;
      long ka = 2 * a.second + a.first, kb = 2 * b.second + b.first;
      if (kb < ka) std::swap(a, b);
      PairwiseResult pr = pairwise_ratio(ra, rb, kJ, {16, 8});
      pairs.push_back({a, b, pr.ratio.to_double(), ra.measure.to_double() * rb.measure.to_double(), std::labs(kb - ka)});
    }
  // fitted constant of a row: pooled sum |B cap B'| |J| / sum |B| |B'| over its partners
  std::map<std::pair<long, long>, std::pair<double, double>> rows;
  double far_lo = INFINITY, far_hi = 0;
  for (const auto& p : pairs) {
    auto& r = rows[p.outer];
    r.first += p.ratio * p.weight;
    r.second += p.weight;
    if (p.gap >= 10) {
      far_lo = std::min(far_lo, p.ratio);
      far_hi = std::max(far_hi, p.ratio);
    }
  }
  std::vector<double> fitted, nonzero;
  std::string zero_rows;
  for (const auto& [k, v] : rows) {
    fitted.push_back(v.first / v.second);
    if (fitted.back() > 0)
      nonzero.push_back(fitted.back());
    else
      zero_rows += " (" + std::to_string(k.first) + "," + std::to_string(k.second) + ")";
  }
  if (!zero_rows.empty()) note("rows with no overlap at all:" + zero_rows);
  if (!nonzero.empty()) note("max/min over the other rows " + fmt(spread(nonzero), 4));
  double ratio_spread = spread(fitted);
  note(std::to_string(pairs.size()) + " non-critical pairs, " + std::to_string(rows.size()) + " rows, fitted C in [" +
       fmt(*std::min_element(fitted.begin(), fitted.end())) + ", " +
       fmt(*std::max_element(fitted.begin(), fitted.end())) + "]");
  note("pairs with (2s'+t')-(2s+t) >= 10: ratio in [" + fmt(far_lo) + ", " + fmt(far_hi) + "]");

  std::vector<double> sums;
  bool increasing = true;
  for (long smax : {20L, 40L, 80L}) {
    double sum = 0;
    for (auto [t, s] : grid_R(kC1, kC2, smax).members) {
      const BStarReport& r = report_at(t, s);
      if (!r.empty) sum += r.measure.to_double();
    }
    if (!sums.empty() && !(sum > sums.back())) increasing = false;
    sums.push_back(sum);
  }
  double secs = std::chrono::duration<double>(clk::now() - t0).count();
  bool pass = ratio_spread < 10 && increasing;
  return {pass, "fitted constant max/min " + fmt(ratio_spread, 4) + " (limit 10); partial sums " + fmt(sums[0], 6) +
                    " < " + fmt(sums[1], 6) + " < " + fmt(sums[2], 6) + (increasing ? "" : " NOT increasing") + ", " +
                    fmt(secs, 3) + " s"};
}

Rational random_rational(std::mt19937_64& rng, bool nonzero) {
  std::uniform_int_distribution<long> num(-40, 40), den(1, 25);
  for (;;) {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    if (!nonzero || q != 0) return q;
  }
}

Verdict criterion5() {
  auto t0 = clk::now();
  std::mt19937_64 rng(5);
  int conj = 0, aff = 0;
  for (int i = 0; i < 100; ++i) {
    Line l{Real(random_rational(rng, true)), Real(random_rational(rng, false))};
    Rational rq = random_rational(rng, true);
    while (abs(rq) > 2) rq /= 2;
    Real r(rq), x0(random_rational(rng, false));
    conj += is_single_term_unipotent(conjugation_residual(l, x0, r), 0, 2, l.a * r, ExpArg{2, -2});
    aff += is_single_term_unipotent(affine_factorization_residual(l, x0), 0, 1, -l.a, ExpArg{2, -2});
  }
  double secs = std::chrono::duration<double>(clk::now() - t0).count();
  return {conj == 100 && aff == 100 && secs < 5,
          "conjugation " + std::to_string(conj) + "/100 single term a r e^(t-s), affine " + std::to_string(aff) +
              "/100 single term -a e^(t-s), " + fmt(secs, 3) + " s (budget 5)"};
}

Verdict criterion6() {
  auto t0 = clk::now();
  std::mt19937_64 rng(6);
  int agree = 0, checked = 0, redrawn = 0;
  while (checked < 500) {
    Lattice3 L = oracle::random_unimodular(rng);
    long box = 0;
    for (long b : {4L, 8L, 16L, 24L, 32L})
      if (oracle::box_certifies(L, b)) {
        box = b;
        break;
      }
    if (!box) {
      ++redrawn;
      continue;
    }
    ShortVecResult fast = sup_shortest_vector(L), slow = oracle::brute_shortest(L, box);
    agree += fast.coeffs == slow.coeffs && fast.norm == slow.norm;
    ++checked;
  }
  long cells = 0, violations = 0;
  for (auto [t, s] : grid_R(kC1, kC2, 40).members) {
    const BStarReport& r = report_at(t, s);
    cells += r.evaluated;
    violations += r.minkowski_violations;
  }
  double secs = std::chrono::duration<double>(clk::now() - t0).count();
  note(std::to_string(redrawn) + " lattices redrawn (no certifying box <= 32)");
  return {agree == 500 && cells >= 10000 && violations == 0,
          "LLL+enumeration equals brute force on " + std::to_string(agree) + "/500 lattices; Minkowski norm <= 1 on " +
              std::to_string(cells - violations) + "/" + std::to_string(cells) + " orbit lattices, " + fmt(secs, 3) +
              " s"};
}

Verdict criterion7() {
  auto t0 = clk::now();
  auto norms = orbit_shortest_norms(Real(10), Real(25), kJ, kLine, 1L << 17);
  std::vector<double> lx, ly;
  for (long k : {5L, 7L, 10L, 14L, 20L, 30L}) {
    Real theta = Real::rational(k, 100);
    ObservableSpec F = ObservableSpec::cusp(theta);
    double hits = 0;
    for (const auto& n : norms) hits += F(n).to_double();
    double avg = hits / norms.size();
    note("theta=" + fmt(k / 100.0, 2) + " average " + fmt(avg, 5));
    if (avg > 0) {
      lx.push_back(std::log(k / 100.0));
      ly.push_back(std::log(avg));
    }
  }
  double n = lx.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  double slope = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : NAN;
  double secs = std::chrono::duration<double>(clk::now() - t0).count();
  bool pass = lx.size() == 6 && slope >= 2.5 && slope <= 3.5 && secs < 300;
  return {pass, "log-log slope " + fmt(slope, 4) + " over theta in [0.05, 0.3] from " + std::to_string(norms.size()) +
                    " orbit samples at (10,25), " + fmt(secs, 3) + " s (budget 300)"};
}

Verdict criterion8() {
  auto t0 = clk::now();
  Real g = Real::golden_ratio() - Real(1);
  Real R(exp(BigFloat(15L)));
  std::vector<Real> ts;
  for (long t = 1; t <= 20; ++t) ts.push_back(Real(t));
  int above = 0;
  double lo = INFINITY, hi = 0;
  BigFloat C_fit = BigFloat::infinity(-1);
  bool holds = true;
  for (long k = 1; k <= 20; ++k) {
    Real x = frac_part(Real(k) * g);
    LoglawResult r = loglaw_excursion(x, kLine, R, Real(1), Real(48));
    double v = r.sup_ratio.to_double();
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    above += v > 1.0 / 3 - 0.05;
    AntiQuadrantFit fit = anti_quadrant_fit(x, kLine, ts);
    // C fitted on the first ten samples, then tested on the other ten
    if (k <= 10) {
      if (fit.C > C_fit) C_fit = fit.C;
    } else {
      holds = holds && fit.C <= C_fit;
    }
  }
  double secs = std::chrono::duration<double>(clk::now() - t0).count();
  return {above >= 18 && holds,
          std::to_string(above) + "/20 sup ratios above 1/3-0.05 (range [" + fmt(lo) + ", " + fmt(hi) +
              "], |t| covered to 48); anti-quadrant Delta >= t - C with C = " + C_fit.to_string(6) +
              (holds ? " fitted on 10 x, holds on the other 10" : " fitted on 10 x, FAILS on held-out x") + ", " +
              fmt(secs, 3) + " s"};
}

Verdict criterion9() {
  auto t0 = clk::now();
  std::mt19937_64 rng(1729);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int dropped = 0, same = 0;
  for (int i = 0; i < 10; ++i) {
    Real beta(Rational(u(rng)));
    GallagherResult r = gallagher_scan(kLine.f(beta), beta, 1000000);
    BigFloat at_1e3 = BigFloat::infinity();
    for (const auto& row : r.trace)
      if (row.n <= 1000) at_1e3 = row.value;
    dropped += r.min_value < at_1e3;
    GallagherResult r2;
    {
      ScopedPrecision twice(2 * precision_bits());
      r2 = gallagher_scan(kLine.f(beta), beta, 1000000);
    }
    bool eq = r.trace.size() == r2.trace.size();
    for (std::size_t k = 0; eq && k < r.trace.size(); ++k)
      eq = r.trace[k].n == r2.trace[k].n &&
           abs(r.trace[k].value - r2.trace[k].value) <= abs(r2.trace[k].value) * BigFloat(1e-20);
    same += eq;
    note("beta=" + beta.to_string(8) + " min(N=1e3)=" + at_1e3.to_string(6) + " min(N=1e6)=" +
         r.min_value.to_string(6) + " argmin=" + std::to_string(r.argmin));
  }
  double secs = std::chrono::duration<double>(clk::now() - t0).count();
  return {dropped >= 9 && same == 10, std::to_string(dropped) + "/10 running minima drop between N=1e3 and N=1e6; " +
                                          std::to_string(same) + "/10 traces identical at doubled precision, " +
                                          fmt(secs, 3) + " s"};
}

}  // namespace

int main(int argc, char** argv) {
  set_precision_bits(kDefaultPrecisionBits);
  std::vector<std::pair<std::string, std::function<Verdict()>>> all{
      {"Bohr containment", criterion1},       {"near-line counting", criterion2},
      {"B* construction", criterion3},        {"quasi-independence", criterion4},
      {"symbolic residuals", criterion5},     {"shortest-vector oracle", criterion6},
      {"theta^3 excursion law", criterion7},  {"log-law lower mechanism", criterion8},
      {"Gallagher scan trend", criterion9}};
  std::set<int> pick;
  for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    int id = static_cast<int>(i) + 1;
    if (!pick.empty() && !pick.count(id)) continue;
    Verdict v;
    try {
      v = all[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", id, all[i].first.c_str(), v.summary.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
