#include "mdlab/dynlab.hpp"

#include "mdlab/errors.hpp"
#include "mdlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdlab {

IntervalSet::IntervalSet(std::vector<Interval> parts) {
  parts.erase(std::remove_if(parts.begin(), parts.end(), [](const Interval& I) { return I.hi < I.lo; }),
              parts.end());
  std::sort(parts.begin(), parts.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  for (auto& I : parts) {
    if (!parts_.empty() && I.lo <= parts_.back().hi) {
      if (I.hi > parts_.back().hi) parts_.back().hi = I.hi;
    } else {
      parts_.push_back(std::move(I));
    }
  }
}

Real IntervalSet::measure() const {
  Real m(0);
  for (const auto& I : parts_) m += I.hi - I.lo;
  return m;
}

bool IntervalSet::contains(const Real& x) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x, [](const Real& v, const Interval& I) { return v < I.lo; });
  if (it == parts_.begin()) return false;
  --it;
  return x <= it->hi;
}

IntervalSet unite(const IntervalSet& a, const IntervalSet& b) {
  std::vector<Interval> all = a.parts_;
  all.insert(all.end(), b.parts_.begin(), b.parts_.end());
  return IntervalSet(std::move(all));
}

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
  IntervalSet out;
  std::size_t i = 0, j = 0;
  while (i < a.parts_.size() && j < b.parts_.size()) {
    const Interval& x = a.parts_[i];
    const Interval& y = b.parts_[j];
    const Real& lo = x.lo < y.lo ? y.lo : x.lo;
    const Real& hi = x.hi < y.hi ? x.hi : y.hi;
    if (lo <= hi) out.parts_.push_back({lo, hi});
    if (x.hi < y.hi)
      ++i;
    else
      ++j;
  }
  return out;
}

Real length(const Interval& I) { return I.hi < I.lo ? Real(0) : I.hi - I.lo; }

Real overlap(const Interval& I, const IntervalSet& S) { return intersect(IntervalSet({I}), S).measure(); }

GridR grid_R(const Real& c1, const Real& c2, long s_max) {
  if (c1.sign() <= 0 || !(c1 < c2)) throw DomainError("grid_R needs 0 < c1 < c2");
  GridR g{c1, c2, s_max, {}};
  for (long s = 1; s <= s_max; ++s) {
    long lo = std::max(1L, ceil(c1 * Real(s)).get_si());
    long hi = floor(c2 * Real(s)).get_si();
    for (long t = lo; t <= hi; ++t) g.members.push_back({t, s});
  }
  return g;
}

namespace {

Real cusp_threshold(long t, long s, const Real& eps) {
  BigFloat l(t + s);
  return Real(eps.to_bigfloat() * pow(l, BigFloat(Rational(-2, 3))));
}

unsigned bits_for(long t, long s) { return std::max(precision_bits(), flow_precision_bits(t, s)); }

Rational exact(const BigFloat& x) { return to_rational(x); }

// frac(k alpha), alpha = (sqrt 5 - 1)/2. Sample positions built from these are
// quadratic irrationals; rational positions sit deep in the cusp of a(t,s)u(phi(x)).
BigFloat golden_frac(const BigFloat& k) {
  BigFloat a = (sqrt(BigFloat(5L)) - BigFloat(1L)) / BigFloat(2L);
  BigFloat v = k * a;
  return v - BigFloat(floor_to_integer(v));
}

}  // namespace

BEpsResult build_B_eps(long t, long s, const Real& eps, const Interval& J, const Line& line,
                       const Real& resolution_factor) {
  if (resolution_factor.sign() <= 0 || resolution_factor > Real::rational(1, 4))
    throw DomainError("build_B_eps needs 0 < resolution_factor <= 1/4");
  if (eps.sign() <= 0 || t < 0 || s < 0 || t + s < 1) throw DomainError("build_B_eps needs eps > 0, s + t >= 1");
  if (!(J.lo < J.hi)) throw DomainError("build_B_eps needs a nonempty J");
  ScopedPrecision prec(bits_for(t, s));

  BigFloat step = resolution_factor.to_bigfloat() * exp(BigFloat(-(2 * s + t)));
  if (step.is_zero() || !step.is_finite()) throw RangeError("scan step underflows");
  Rational step_r = exact(step);
  BigFloat n_f = ceil_to_integer((J.hi - J.lo).to_bigfloat() / step);
  if (n_f.to_double() > budget_cells())
    throw BudgetError("B_eps scan needs " + n_f.to_string(6) + " samples, budget is " + std::to_string(budget_cells()));
  long n = static_cast<long>(n_f.to_double());

  BigFloat thr = cusp_threshold(t, s, eps).to_bigfloat();
  BigFloat et = exp(BigFloat(t)), es = exp(BigFloat(s));
  BigFloat lo = J.lo.to_bigfloat();
  std::vector<char> fail(static_cast<std::size_t>(n), 0);
  kernels::parallel_for(n, [&](long i) {
    BigFloat x = lo + step * BigFloat(Rational(2 * i + 1, 2));
    Lattice3 L{orbit_basis(et, es, line.f(x), x), ""};
    fail[static_cast<std::size_t>(i)] = sup_shortest_vector(L).norm <= thr;
  });

  std::vector<Interval> runs;
  for (long i = 0; i < n;) {
    if (!fail[static_cast<std::size_t>(i)]) {
      ++i;
      continue;
    }
    long j = i;
    while (j + 1 < n && fail[static_cast<std::size_t>(j + 1)]) ++j;
    Real a = J.lo + Real(Rational(i) * step_r), b = J.lo + Real(Rational(j + 1) * step_r);
    runs.push_back({a, b < J.hi ? b : J.hi});
    i = j + 1;
  }
  return {IntervalSet(std::move(runs)), Real(step_r), n, true};
}

long bstar_kappa(long t, long s, const Real& eps) {
  if (eps.sign() <= 0 || eps >= Real(1)) throw DomainError("eps must lie in (0, 1)");
  if (t + s < 1) throw DomainError("bstar_kappa needs s + t >= 1");
  ScopedPrecision prec(precision_bits() + 64);
  BigFloat y = BigFloat(Rational(2, 3)) * log(BigFloat(t + s)) - log(eps.to_bigfloat());
  return floor_to_integer(y).get_si();
}

namespace {

struct CellCtx {
  BigFloat et, es, h, lo;
  Rational hw;
  const BStarReport* report;
};

CellCtx make_ctx(const BStarReport& r) {
  return {exp(BigFloat(r.t_star)), exp(BigFloat(r.s_star)), r.h, r.params.J.lo.to_bigfloat(), r.half_width, &r};
}

struct CellEval {
  BigFloat norm;
  std::optional<BStarCell> cell;
};

CellEval eval_cell(const CellCtx& c, const Integer& index) {
  const BStarParams& p = c.report->params;
  BigFloat x0 = c.lo + BigFloat(Integer(2 * index + 1)) * c.h;
  Lattice3 L{orbit_basis(c.et, c.es, p.line.f(x0), x0), ""};
  ShortVecResult sv = sup_shortest_vector(L);
  CellEval out{sv.norm, std::nullopt};
  if (abs(sv.vector[2]) < BigFloat(Rational(1, 2))) return out;
  BigFloat r = -sv.vector[1] / sv.vector[2];
  if (abs(r) > BigFloat(2L))
    throw std::logic_error("case (i) shift |r*| > 2 at subinterval " + index.get_str());
  Rational x1 = exact(x0 + r * c.h);
  Real lo(Rational(x1 - c.hw)), hi(Rational(x1 + c.hw));
  BStarCell cell;
  cell.index = index;
  cell.x0 = x0;
  cell.coeffs = sv.coeffs;
  cell.v = sv.vector;
  cell.norm = sv.norm;
  cell.r_star = Real(r);
  cell.x1 = Real(x1);
  cell.clipped = lo < p.J.lo || hi > p.J.hi;
  cell.I1 = {lo < p.J.lo ? p.J.lo : lo, hi > p.J.hi ? p.J.hi : hi};
  out.cell = std::move(cell);
  return out;
}

}  // namespace

BStarReport build_B_star(const BStarParams& params) {
  const long t = params.t, s = params.s;
  if (t < 0 || s < 0 || t + s < 1) throw DomainError("build_B_star needs t, s >= 0 and s + t >= 1");
  if (!(params.J.lo < params.J.hi)) throw DomainError("build_B_star needs a nonempty J");
  if (params.samples < 1 || params.exhaustive_cap < 0) throw DomainError("build_B_star needs samples >= 1");
  BStarReport r;
  r.params = params;
  r.kappa = bstar_kappa(t, s, params.eps);
  r.t_star = t + r.kappa;
  r.s_star = s - 2 * r.kappa;
  r.theta = params.eps * params.eps * params.eps / Real((t + s) * (t + s));
  r.measure = Real(0);
  r.subintervals = 0;
  r.max_norm = BigFloat(0L);
  if (r.s_star <= 0) {
    r.empty_reason = "s* <= 0";
    return r;
  }
  if (params.T1 >= 0 && t + s < params.T1) {
    r.empty_reason = "s+t < T1";
    return r;
  }

  ScopedPrecision prec(std::max(bits_for(r.t_star, r.s_star), bits_for(t, s)));
  r.precision = precision_bits();
  r.h = exp(BigFloat(-(2 * r.s_star + r.t_star)));
  BigFloat Jlen = (params.J.hi - params.J.lo).to_bigfloat();
  if (params.T1 < 0 && r.h * BigFloat(10L) >= Jlen) {
    r.empty_reason = "e^{-2s*-t*} >= |J|/10";
    return r;
  }
  r.empty = false;
  r.half_width = exact(r.theta.to_bigfloat() * r.h);
  r.subintervals = ceil_to_integer(Jlen / (BigFloat(2L) * r.h));

  std::vector<Integer> idx;
  r.exhaustive = r.subintervals <= params.exhaustive_cap;
  if (r.exhaustive) {
    for (long i = 0; i < r.subintervals.get_si(); ++i) idx.emplace_back(i);
  } else {
    BigFloat K(r.subintervals);
    for (long j = 0; j < params.samples; ++j)
      idx.push_back(floor_to_integer(golden_frac(BigFloat(Rational(2 * j + 1, 2))) * K));
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  }
  r.evaluated = static_cast<long>(idx.size());

  CellCtx ctx = make_ctx(r);
  std::vector<CellEval> evals(idx.size());
  kernels::parallel_for(r.evaluated, [&](long i) {
    evals[static_cast<std::size_t>(i)] = eval_cell(ctx, idx[static_cast<std::size_t>(i)]);
  });

  std::vector<Interval> parts;
  BigFloat emitted(0L);
  BigFloat one(1L);
  for (auto& e : evals) {
    if (e.norm > r.max_norm) r.max_norm = e.norm;
    if (e.norm > one) ++r.minkowski_violations;
    if (!e.cell) continue;
    ++r.case_i;
    if (!(e.cell->I1.hi < e.cell->I1.lo)) {
      parts.push_back(e.cell->I1);
      emitted += length(e.cell->I1).to_bigfloat();
    }
    r.cells.push_back(std::move(*e.cell));
  }
  r.intervals = IntervalSet(std::move(parts));
  if (r.exhaustive)
    r.measure = r.intervals.measure();
  else
    r.measure = Real(emitted / BigFloat(r.evaluated) * BigFloat(r.subintervals));
  return r;
}

std::optional<BStarCell> bstar_cell(const BStarReport& report, const Integer& index) {
  if (report.empty) return std::nullopt;
  if (index < 0 || index >= report.subintervals) throw DomainError("subinterval index out of range");
  ScopedPrecision prec(std::max(precision_bits(), report.precision));
  return eval_cell(make_ctx(report), index).cell;
}

RecheckStats bstar_recheck(const BStarReport& report, int points) {
  if (points < 2) throw DomainError("bstar_recheck needs at least two points");
  RecheckStats st;
  st.max_scaled = BigFloat(0L);
  if (report.empty) return st;
  ScopedPrecision prec(std::max(precision_bits(), report.precision));
  const long t = report.params.t, s = report.params.s;
  BigFloat et = exp(BigFloat(t)), es = exp(BigFloat(s));
  BigFloat thr = cusp_threshold(t, s, report.params.eps).to_bigfloat();
  BigFloat thr_k = exp(BigFloat(-report.kappa));
  for (const auto& c : report.cells) {
    if (c.I1.hi < c.I1.lo) continue;
    for (int k = 0; k < points; ++k) {
      Real x = c.I1.lo + (c.I1.hi - c.I1.lo) * Real::rational(k, points - 1);
      BigFloat xb = x.to_bigfloat();
      Lattice3 L{orbit_basis(et, es, report.params.line.f(xb), xb), ""};
      BigFloat n = sup_norm(L.point(c.coeffs));
      ++st.points;
      if (n > thr) ++st.fail_eps;
      if (n > thr_k) ++st.fail_kappa;
      BigFloat q = n / thr;
      if (q > st.max_scaled) st.max_scaled = q;
    }
  }
  return st;
}

bool is_noncritical(long t, long s, long t2, long s2, const Real& c1, const Real& c2) {
  long a = 2 * s + t, b = 2 * s2 + t2;
  if (a > b) std::swap(a, b);
  Real c3 = (c2 - c1) / Real(4);
  return Real(b - a) >= c3 * Real(a);
}

PairwiseResult pairwise_ratio(const BStarReport& r1, const BStarReport& r2, const Interval& J,
                              const PairwiseOptions& opt) {
  if (r1.empty || r2.empty || r1.measure.sign() <= 0 || r2.measure.sign() <= 0)
    throw DomainError("pairwise_ratio needs two reports of positive measure");
  if (opt.outer_max < 1 || opt.inner_max < 1) throw DomainError("pairwise options must be positive");
  Real Jlen = J.hi - J.lo;
  PairwiseResult out;
  if (r1.exhaustive && r2.exhaustive) {
    Real inter = intersect(r1.intervals, r2.intervals).measure();
    out.exact = true;
    out.intersection = inter.to_bigfloat();
    out.ratio = inter * Jlen / (r1.measure * r2.measure);
    return out;
  }

  bool swap = 2 * r2.params.s + r2.params.t < 2 * r1.params.s + r1.params.t;
  const BStarReport& outer = swap ? r2 : r1;
  const BStarReport& inner = swap ? r1 : r2;
  ScopedPrecision prec(std::max({precision_bits(), outer.precision, inner.precision}));

  const auto& parts = outer.intervals.parts();
  std::vector<std::size_t> pick;
  long n_outer = std::min<long>(opt.outer_max, static_cast<long>(parts.size()));
  for (long j = 0; j < n_outer; ++j)
    pick.push_back(static_cast<std::size_t>((2 * j + 1) * static_cast<long>(parts.size()) / (2 * n_outer)));

  CellCtx ctx = make_ctx(inner);
  BigFloat Jlo = inner.params.J.lo.to_bigfloat();
  BigFloat two_h = BigFloat(2L) * inner.h;
  std::vector<BigFloat> weighted(pick.size());
  std::vector<BigFloat> lens(pick.size());
  kernels::parallel_for(static_cast<long>(pick.size()), [&](long k) {
    const Interval& I = parts[pick[static_cast<std::size_t>(k)]];
    lens[static_cast<std::size_t>(k)] = length(I).to_bigfloat();
    if (inner.exhaustive) {
      weighted[static_cast<std::size_t>(k)] = overlap(I, inner.intervals).to_bigfloat();
      return;
    }
    // cell j emits inside [Jlo + (2j-2)h, Jlo + (2j+4)h]
    Integer a = floor_to_integer((I.lo.to_bigfloat() - Jlo) / two_h) - 2;
    Integer b = floor_to_integer((I.hi.to_bigfloat() - Jlo) / two_h) + 2;
    if (a < 0) a = 0;
    if (b > inner.subintervals - 1) b = inner.subintervals - 1;
    if (b < a) {
      weighted[static_cast<std::size_t>(k)] = BigFloat(0L);
      return;
    }
    Integer range = b - a + 1;
    std::vector<Integer> cells;
    if (range <= opt.inner_max) {
      for (Integer j = a; j <= b; ++j) cells.push_back(j);
    } else {
      for (long j = 0; j < opt.inner_max; ++j) cells.push_back(a + Integer((2 * j + 1) * range) / (2 * opt.inner_max));
    }
    IntervalSet single({I});
    std::vector<Interval> hits;
    BigFloat sum(0L);
    for (const auto& j : cells) {
      CellEval e = eval_cell(ctx, j);
      if (!e.cell) continue;
      hits.push_back(e.cell->I1);
      sum += overlap(e.cell->I1, single).to_bigfloat();
    }
    // every cell seen: overlapping I1 are counted once
    if (range <= opt.inner_max)
      weighted[static_cast<std::size_t>(k)] = intersect(single, IntervalSet(std::move(hits))).measure().to_bigfloat();
    else
      weighted[static_cast<std::size_t>(k)] = sum * BigFloat(range) / BigFloat(static_cast<long>(cells.size()));
  });
  BigFloat num(0L), den(0L);
  for (std::size_t k = 0; k < pick.size(); ++k) {
    num += weighted[k];
    den += lens[k];
  }
  BigFloat density = num / den;
  out.intersection = density * outer.measure.to_bigfloat();
  out.ratio = Real(density * Jlen.to_bigfloat() / inner.measure.to_bigfloat());
  return out;
}

BigFloat ObservableSpec::operator()(const BigFloat& n) const {
  switch (kind) {
    case Kind::constant:
      return BigFloat(1L);
    case Kind::cusp_indicator:
      return BigFloat(n <= param.to_bigfloat() ? 1L : 0L);
    case Kind::capped_delta:
      return min(-log(n), param.to_bigfloat());
    case Kind::norm_power:
      return pow(n, param.to_bigfloat());
  }
  return BigFloat(0L);
}

std::string ObservableSpec::id() const {
  switch (kind) {
    case Kind::constant:
      return "const";
    case Kind::cusp_indicator:
      return "cusp:" + param.repr();
    case Kind::capped_delta:
      return "capped:" + param.repr();
    case Kind::norm_power:
      return "power:" + param.repr();
  }
  return "";
}

std::vector<BigFloat> orbit_shortest_norms(const Real& t, const Real& s, const Interval& J, const Line& line,
                                           long n_samples) {
  if (n_samples < 1) throw DomainError("orbit_shortest_norms needs n_samples >= 1");
  if (!(J.lo < J.hi)) throw DomainError("orbit_shortest_norms needs a nonempty J");
  if (static_cast<double>(n_samples) > budget_cells())
    throw BudgetError("orbit average needs " + std::to_string(n_samples) + " samples");
  FlowPrecision prec(t.to_double(), s.to_double());
  BigFloat et = exp(t.to_bigfloat()), es = exp(s.to_bigfloat());
  BigFloat lo = J.lo.to_bigfloat(), w = (J.hi - J.lo).to_bigfloat() / BigFloat(n_samples);
  std::vector<BigFloat> out(static_cast<std::size_t>(n_samples));
  kernels::parallel_for(n_samples, [&](long i) {
    BigFloat x = lo + w * (BigFloat(i) + golden_frac(BigFloat(i + 1)));
    Lattice3 L{orbit_basis(et, es, line.f(x), x), ""};
    out[static_cast<std::size_t>(i)] = sup_shortest_vector(L).norm;
  });
  return out;
}

Real orbit_average(const ObservableSpec& obs, const Real& t, const Real& s, const Interval& J, const Line& line,
                   long n_samples) {
  if (n_samples < 100) throw DomainError("orbit_average needs n_samples >= 100");
  if (obs.kind == ObservableSpec::Kind::constant) return Real(1);
  auto norms = orbit_shortest_norms(t, s, J, line, n_samples);
  BigFloat sum(0L);
  for (const auto& n : norms) sum += obs(n);
  return Real(sum / BigFloat(n_samples));
}

LoglawResult loglaw_excursion(const Real& x, const Line& line, const Real& R, const Real& grid_step,
                              const std::optional<Real>& cover_cap) {
  BigFloat e = exp(BigFloat(1L));
  if (R.to_bigfloat() < e * e) throw DomainError("loglaw_excursion needs R >= e^2");
  if (grid_step.sign() <= 0 || grid_step > Real(1)) throw DomainError("loglaw_excursion needs 0 < grid_step <= 1");
  Real Rc = cover_cap && *cover_cap < R ? *cover_cap : R;
  BigFloat rc = Rc.to_bigfloat(), h = grid_step.to_bigfloat();
  double nmax_d = floor_to_integer(rc / h).get_d();
  if ((nmax_d + 1) * (nmax_d + 1) > budget_cells())
    throw BudgetError("log-law grid needs " + std::to_string((nmax_d + 1) * (nmax_d + 1)) + " points");
  long nmax = static_cast<long>(nmax_d);

  struct Pt {
    long i, j;
    BigFloat norm;
  };
  std::vector<Pt> pts;
  BigFloat e2 = e * e, rc2 = rc * rc;
  for (long i = 0; i <= nmax; ++i)
    for (long j = 0; j <= nmax; ++j) {
      BigFloat n2 = BigFloat(i * i + j * j) * h * h;
      if (n2 >= e2 && n2 <= rc2) pts.push_back({i, j, sqrt(n2)});
    }
  std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
    int c = compare(a.norm, b.norm);
    return c != 0 ? c < 0 : std::pair{a.i, a.j} < std::pair{b.i, b.j};
  });

  FlowPrecision prec(rc.to_double(), rc.to_double());
  BigFloat xb = x.to_bigfloat(), f = line.f(xb);
  std::vector<BigFloat> ratio(pts.size());
  kernels::parallel_for(static_cast<long>(pts.size()), [&](long k) {
    const Pt& p = pts[static_cast<std::size_t>(k)];
    BigFloat et = exp(BigFloat(p.i) * h), es = exp(BigFloat(p.j) * h);
    Lattice3 L{orbit_basis(et, es, f, xb), ""};
    ratio[static_cast<std::size_t>(k)] = -log(sup_shortest_vector(L).norm) / log(p.norm);
  });

  LoglawResult out;
  out.covered_radius = rc;
  out.sup_ratio = BigFloat::infinity(-1);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (ratio[k] > out.sup_ratio) {
      out.sup_ratio = ratio[k];
      out.t1 = Real(Rational(pts[k].i)) * grid_step;
      out.t2 = Real(Rational(pts[k].j)) * grid_step;
    }
    out.trace.push_back({pts[k].norm, ratio[k], out.sup_ratio});
  }
  return out;
}

BigFloat anti_quadrant_delta(const Real& x, const Line& line, const Real& t) {
  FlowPrecision prec(t.to_double(), 1.0);
  BigFloat xb = x.to_bigfloat();
  Lattice3 L{orbit_basis(exp(-t.to_bigfloat()), exp(BigFloat(1L)), line.f(xb), xb), ""};
  return -log(sup_shortest_vector(L).norm);
}

AntiQuadrantFit anti_quadrant_fit(const Real& x, const Line& line, const std::vector<Real>& ts) {
  AntiQuadrantFit fit;
  fit.C = BigFloat::infinity(-1);
  for (const auto& t : ts) {
    BigFloat d = anti_quadrant_delta(x, line, t);
    BigFloat gap = t.to_bigfloat() - d;
    if (gap > fit.C) fit.C = gap;
    fit.rows.push_back({t, d});
  }
  return fit;
}

void write_bstar_csv(std::ostream& out, const std::vector<BStarReport>& reports) {
  out << "t,s,kappa,t_star,s_star,subintervals,evaluated,fraction,measure,exhaustive\n";
  for (const auto& r : reports)
    out << r.params.t << ',' << r.params.s << ',' << r.kappa << ',' << r.t_star << ',' << r.s_star << ','
        << r.subintervals.get_str() << ',' << r.evaluated << ',' << BigFloat(r.fraction()).to_string(30) << ','
        << r.measure.to_string(30) << ',' << (r.exhaustive ? "true" : "false") << '\n';
}

void write_pairwise_csv(std::ostream& out, const std::vector<PairRow>& rows) {
  out << "t,s,t2,s2,ratio,noncritical,exact\n";
  for (const auto& r : rows)
    out << r.t << ',' << r.s << ',' << r.t2 << ',' << r.s2 << ',' << r.ratio.to_string(30) << ','
        << (r.noncritical ? "true" : "false") << ',' << (r.exact ? "true" : "false") << '\n';
}

void write_loglaw_csv(std::ostream& out, const std::vector<LoglawRow>& rows) {
  out << "norm,ratio,running_sup\n";
  for (const auto& r : rows)
    out << r.norm.to_string(30) << ',' << r.ratio.to_string(30) << ',' << r.running.to_string(30) << '\n';
}

void write_equidist_csv(std::ostream& out, const std::vector<EquidistRow>& rows) {
  out << "t,s,average,observable\n";
  for (const auto& r : rows)
    out << r.t.to_string(30) << ',' << r.s.to_string(30) << ',' << r.average.to_string(30) << ',' << r.observable
        << '\n';
}

}  // namespace mdlab
