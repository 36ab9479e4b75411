#include "mdlab/dioph.hpp"

#include "mdlab/errors.hpp"
#include "mdlab/kernels.hpp"

#include <cmath>
#include <limits>

namespace mdlab {

namespace {

using kernels::DD;

// <n x>: exact for rational x, so rational inputs produce genuine zeros.
BigFloat fd(const Real& x, const BigFloat& xb, const Integer& n) {
  if (x.kind() == Real::Kind::rational) return frac_dist(Real(n) * x).to_bigfloat();
  return nearest_int_distance(xb * n);
}

BigFloat fd(const Real& x, const BigFloat& xb, long n) { return fd(x, xb, Integer(n)); }

// Exact test of <x a + y b> = 0 where the representation allows it.
bool is_relation(const Real& a, const Real& b, long x, long y) {
  Real v = Real(x) * a + Real(y) * b;
  if (v.is_exact()) return frac_dist(v).is_zero();
  return nearest_int_distance(v.to_bigfloat()).is_zero();
}

// <n x> from double-double arithmetic.
double fd_dd(const DD& x, long n) { return kernels::frac_dist_dd(x, n); }

constexpr double kRelationFloor = 1e-24;

void add_witness(ExponentEstimate& est, std::vector<Integer> datum, const BigFloat& w) {
  est.witnesses.push_back({std::move(datum), w});
  est.lower_bound = w;
}

ExponentEstimate scan_n(ExponentKind kind, const Real& a, const Real& b, long Nmax) {
  if (Nmax < 2) throw DomainError("exponent scan needs Nmax >= 2");
  ExponentEstimate est;
  est.kind = kind;
  est.search_bound = Nmax;
  est.lower_bound = BigFloat(0L);
  BigFloat ab = a.to_bigfloat(), bb = b.to_bigfloat();
  DD ad = kernels::to_dd(ab), bd = kernels::to_dd(bb);
  double best = 0;
  bool mult = kind == ExponentKind::multiplicative;
  for (long n = 1; n <= Nmax; ++n) {
    double da = fd_dd(ad, n), db = fd_dd(bd, n);
    bool za = da < kRelationFloor && fd(a, ab, n).is_zero();
    bool zb = db < kRelationFloor && fd(b, bb, n).is_zero();
    if (mult ? (za || zb) : (za && zb)) {
      est.infinite = true;
      add_witness(est, {Integer(n)}, BigFloat::infinity());
      return est;
    }
    if (n < 2) continue;
    double ln = std::log(static_cast<double>(n));
    double approx;
    if (mult)
      approx = (-std::log(std::max(da, 1e-300)) - std::log(std::max(db, 1e-300))) / ln;
    else
      approx = -std::log(std::max(std::max(da, db), 1e-300)) / ln;
    if (approx < best - 1e-9) continue;
    BigFloat w = witness_quality(kind, a, b, {{Integer(n)}, BigFloat()});
    if (w > est.lower_bound || est.witnesses.empty()) {
      add_witness(est, {Integer(n)}, w);
      best = w.to_double();
    }
  }
  return est;
}

}  // namespace

MarginResult diophantine_margin(const std::vector<Real>& vals, const Real& kappa, long Qmax) {
  if (Qmax < 1) throw DomainError("diophantine_margin needs Qmax >= 1");
  if (vals.empty()) throw DomainError("diophantine_margin needs at least one value");
  if (kappa.sign() <= 0) throw DomainError("diophantine_margin needs kappa > 0");
  std::vector<BigFloat> xb;
  for (const auto& v : vals) xb.push_back(v.to_bigfloat());
  BigFloat expo = BigFloat(1L) / BigFloat(static_cast<long>(vals.size())) + kappa.to_bigfloat();
  MarginResult out{BigFloat::infinity(), 0};
  for (long q = 1; q <= Qmax; ++q) {
    BigFloat m(0L);
    for (std::size_t i = 0; i < vals.size(); ++i) m = max(m, fd(vals[i], xb[i], q));
    BigFloat v = m.is_zero() ? m : pow(BigFloat(q), expo) * m;
    if (v < out.margin) {
      out.margin = v;
      out.argmin_q = q;
    }
    if (out.margin.is_zero()) break;
  }
  return out;
}

std::string to_string(ExponentKind kind) {
  switch (kind) {
    case ExponentKind::simultaneous: return "simultaneous";
    case ExponentKind::dual: return "dual";
    case ExponentKind::multiplicative: return "multiplicative";
  }
  return "?";
}

BigFloat witness_quality(ExponentKind kind, const Real& a, const Real& b, const Witness& w) {
  BigFloat ab = a.to_bigfloat(), bb = b.to_bigfloat();
  if (kind == ExponentKind::dual) {
    const Integer& x = w.datum.at(0);
    const Integer& y = w.datum.at(1);
    Integer h = abs(x) + abs(y);
    Real v = Real(x) * a + Real(y) * b;
    BigFloat d = v.kind() == Real::Kind::rational ? frac_dist(v).to_bigfloat() : nearest_int_distance(v.to_bigfloat());
    if (d.is_zero()) return BigFloat::infinity();
    return -log(d) / log(BigFloat(h));
  }
  const Integer& n = w.datum.at(0);
  BigFloat da = fd(a, ab, n), db = fd(b, bb, n);
  if (kind == ExponentKind::multiplicative) {
    if (da.is_zero() || db.is_zero()) return BigFloat::infinity();
    return (-log(da) - log(db)) / log(BigFloat(n));
  }
  BigFloat m = max(da, db);
  if (m.is_zero()) return BigFloat::infinity();
  return -log(m) / log(BigFloat(n));
}

ExponentEstimate omega_dual_lower(const Real& a, const Real& b, long Hmax) {
  if (Hmax < 2) throw DomainError("omega_dual_lower needs Hmax >= 2");
  ExponentEstimate est;
  est.kind = ExponentKind::dual;
  est.search_bound = Hmax;
  est.lower_bound = BigFloat(0L);
  DD ad = kernels::to_dd(a), bd = kernels::to_dd(b);
  double best = 0;
  for (long H = 1; H <= Hmax; ++H) {
    double lh = std::log(static_cast<double>(H));
    for (long x = -H; x <= H; ++x) {
      long ry = H - std::labs(x);
      for (long y : {-ry, ry}) {
        if (ry == 0 && y != ry) continue;
        if (x < 0 || (x == 0 && y < 0)) continue;  // one of each +/- pair
        double approx_d = kernels::frac_dist_dd2(ad, x, bd, y);
        if (approx_d < kRelationFloor * 1e6 && is_relation(a, b, x, y)) {
          est.infinite = true;
          add_witness(est, {Integer(x), Integer(y)}, BigFloat::infinity());
          return est;
        }
        if (H < 2) continue;
        double approx = -std::log(std::max(approx_d, 1e-300)) / lh;
        if (approx < best - 1e-6) continue;
        BigFloat w = witness_quality(ExponentKind::dual, a, b, {{Integer(x), Integer(y)}, BigFloat()});
        if (w > est.lower_bound || est.witnesses.empty()) {
          add_witness(est, {Integer(x), Integer(y)}, w);
          best = w.to_double();
        }
      }
    }
  }
  return est;
}

ExponentEstimate omega_simul_lower(const Real& a, const Real& b, long Nmax) {
  return scan_n(ExponentKind::simultaneous, a, b, Nmax);
}

ExponentEstimate omega_mult_lower(const Real& a, const Real& b, long Nmax) {
  return scan_n(ExponentKind::multiplicative, a, b, Nmax);
}

BsResult b_s_value(const Real& v1, const Real& v2, const Real& s, long hard_cap) {
  if (s.sign() < 0) throw DomainError("b_s_value needs s >= 0");
  BigFloat es = exp(-s.to_bigfloat() / BigFloat(2L));
  BigFloat b1 = v1.to_bigfloat(), b2 = v2.to_bigfloat();
  BsResult out;
  out.value = BigFloat(0L);
  for (long q = 1; q <= hard_cap; ++q) {
    BigFloat bq(q);
    BigFloat inv = BigFloat(1L) / (bq * bq);
    if (inv < out.value) {
      out.stop_q = q;
      out.certified = true;
      return out;
    }
    BigFloat val = inv;
    for (const BigFloat& d : {fd(v1, b1, q), fd(v2, b2, q)})
      if (!d.is_zero()) val = min(val, es / (bq * d));
    if (val > out.value) {
      out.value = val;
      out.q_star = q;
    }
  }
  out.stop_q = hard_cap + 1;
  out.certified = false;
  return out;
}

namespace {

BigFloat gallagher_value(const Real& alpha, const BigFloat& ab, const Real& beta, const BigFloat& bb, long n) {
  BigFloat da = fd(alpha, ab, n);
  if (da.is_zero()) return da;
  BigFloat db = fd(beta, bb, n);
  if (db.is_zero()) return db;
  BigFloat ln = log(BigFloat(n));
  return BigFloat(n) * ln * ln * da * db;
}

}  // namespace

GallagherResult gallagher_scan_reference(const Real& alpha, const Real& beta, long Nmax) {
  if (Nmax < 2) throw DomainError("gallagher_scan needs Nmax >= 2");
  BigFloat ab = alpha.to_bigfloat(), bb = beta.to_bigfloat();
  GallagherResult out;
  out.min_value = BigFloat::infinity();
  for (long n = 2; n <= Nmax; ++n) {
    BigFloat v = gallagher_value(alpha, ab, beta, bb, n);
    if (v < out.min_value) {
      out.min_value = v;
      out.argmin = n;
      out.trace.push_back({n, v});
    }
  }
  return out;
}

GallagherResult gallagher_scan(const Real& alpha, const Real& beta, long Nmax) {
  if (Nmax < 2) throw DomainError("gallagher_scan needs Nmax >= 2");
  BigFloat ab = alpha.to_bigfloat(), bb = beta.to_bigfloat();
  auto cand = kernels::gallagher_candidates_omp(kernels::to_dd(ab), kernels::to_dd(bb), 2, Nmax, 1e-9);
  GallagherResult out;
  out.min_value = BigFloat::infinity();
  for (long n : cand) {
    BigFloat v = gallagher_value(alpha, ab, beta, bb, n);
    if (v < out.min_value) {
      out.min_value = v;
      out.argmin = n;
      out.trace.push_back({n, v});
      if (v.is_zero()) break;
    }
  }
  return out;
}

PsiSpec PsiSpec::closed(const Real& c, const Real& gamma) {
  if (c.sign() < 0 || gamma.sign() < 0) throw DomainError("psi closed form needs c, gamma >= 0");
  PsiSpec p;
  p.kind = Kind::closed_form;
  p.c = c;
  p.gamma = gamma;
  return p;
}

PsiSpec PsiSpec::constant(const Real& c) {
  if (c.sign() < 0) throw DomainError("psi must be nonnegative");
  PsiSpec p;
  p.kind = Kind::constant;
  p.c = c;
  return p;
}

PsiSpec PsiSpec::from_table(std::map<long, Real> table) {
  if (table.empty()) throw DomainError("psi table is empty");
  const Real* prev = nullptr;
  for (const auto& [n, v] : table) {
    if (v.sign() < 0) throw DomainError("psi must be nonnegative");
    if (prev && v > *prev) throw DomainError("psi table is not non-increasing at n=" + std::to_string(n));
    prev = &v;
  }
  PsiSpec p;
  p.kind = Kind::table;
  p.table = std::move(table);
  return p;
}

BigFloat PsiSpec::operator()(long n) const {
  switch (kind) {
    case Kind::constant: return c.to_bigfloat();
    case Kind::table: {
      auto it = table.upper_bound(n);
      if (it == table.begin()) return it->second.to_bigfloat();
      return std::prev(it)->second.to_bigfloat();
    }
    case Kind::closed_form: break;
  }
  if (n < 2) throw DomainError("closed-form psi is defined for n >= 2");
  BigFloat bn(n);
  return c.to_bigfloat() / (bn * pow(log(bn), gamma.to_bigfloat()));
}

std::string PsiSpec::describe() const {
  switch (kind) {
    case Kind::constant: return "const:" + c.repr();
    case Kind::table: return "table:" + std::to_string(table.size()) + " entries";
    case Kind::closed_form: break;
  }
  return "c/(n(log n)^g):c=" + c.repr() + ",g=" + gamma.repr();
}

PsiCount psi_count(const Real& alpha, const Real& beta, const PsiSpec& psi, long Nmax) {
  if (Nmax < 2) throw DomainError("psi_count needs Nmax >= 2");
  BigFloat ab = alpha.to_bigfloat(), bb = beta.to_bigfloat();
  DD ad = kernels::to_dd(ab), bd = kernels::to_dd(bb);
  double cd = psi.c.to_double(), gd = psi.gamma.to_double();
  PsiCount out;
  for (long n = 2; n <= Nmax; ++n) {
    double p = fd_dd(ad, n) * fd_dd(bd, n);
    double ps;
    if (psi.kind == PsiSpec::Kind::closed_form) {
      double nd = static_cast<double>(n);
      ps = cd / (nd * std::pow(std::log(nd), gd));
    } else {
      ps = psi(n).to_double();
    }
    bool hit;
    if (std::fabs(p - ps) > 1e-9 * std::max(ps, p) && std::max(ps, p) > 1e-250) {
      hit = p < ps;
    } else {
      BigFloat pb = fd(alpha, ab, n) * fd(beta, bb, n);
      hit = pb < psi(n);
    }
    if (hit) {
      ++out.count;
      out.solutions.push_back(n);
    }
  }
  return out;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "n,value\n";
  for (const auto& r : trace) out << r.n << ',' << r.value.to_string(30) << '\n';
}

}  // namespace mdlab
