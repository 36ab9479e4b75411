#include "mdlab/bohr.hpp"

#include "mdlab/ddouble.hpp"
#include "mdlab/errors.hpp"
#include "mdlab/parallel.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <stdexcept>

namespace mdlab {

using kernels::DD;

bool BohrParams::regime_ok(double c) const {
  double d = delta.to_double(), q = static_cast<double>(Q);
  if (Q < 2) return false;
  return d < q / 1000.0 && d >= c / std::sqrt(q) * std::pow(std::log(q), -1.5);
}

Integer GapCover::size() const {
  Integer s = 1;
  for (long n : N) s *= Integer(2 * n + 1);
  return s;
}

BohrSet enumerate_bohr(const BohrParams& params) {
  if (params.Q < 0) throw DomainError("enumerate_bohr needs Q >= 0");
  if (params.delta.sign() <= 0) throw DomainError("enumerate_bohr needs delta > 0");
  double cells = std::pow(2.0 * static_cast<double>(params.Q) + 1.0, 2.0);
  if (cells > budget_cells())
    throw BudgetError("Bohr enumeration needs " + std::to_string(cells) + " cells, budget is " +
                      std::to_string(budget_cells()));
  return {params, kernels::bohr_members_omp(params.a, params.b, params.Q, params.delta)};
}

GapCover gap_cover(const BohrParams& params, long C) {
  if (C < 1) throw DomainError("gap_cover needs C >= 1");
  if (params.Q < 1 || params.delta.sign() <= 0) throw DomainError("gap_cover needs Q >= 1 and delta > 0");
  BigFloat Q(params.Q);
  BigFloat lambda = pow(params.delta.to_bigfloat() * Q * Q, BigFloat(Rational(1, 3)));
  BodyNorm body{params.a, params.b, Real(Q / lambda), Real(params.delta.to_bigfloat() / lambda)};
  SuccessiveMinima sm = successive_minima(body);
  GapCover P;
  P.lambda = lambda;
  P.C = C;
  for (int i = 0; i < 3; ++i) {
    P.v[i] = sm.v[i];
    P.minima[i] = sm.lambda[i];
    P.N[i] = floor_to_integer(BigFloat(C) * lambda / sm.lambda[i]).get_si();
  }
  return P;
}

Containment certify_containment(const BohrSet& B, const GapCover& P) {
  Mat3<Integer> V;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) V(i, j) = P.v[j][i];
  Integer d = V.det();
  if (d != 1 && d != -1) throw DomainError("GAP basis is not unimodular");
  Mat3<Integer> inv = V.adjugate();
  for (auto& row : inv.m)
    for (auto& e : row) e *= d;

  // int64 fast path when |inv| * 3 * max|x| cannot overflow
  long xmax = 0;
  for (const auto& x : B.members)
    for (long c : x) xmax = std::max(xmax, std::labs(c));
  Integer imax = 0;
  for (const auto& row : inv.m)
    for (const auto& e : row) imax = std::max(imax, Integer(abs(e)));
  bool fast = imax * 3 * (xmax + 1) < Integer(LONG_MAX / 2);

  Containment out;
  long long li[3][3];
  if (fast)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) li[i][j] = inv(i, j).get_si();
  for (const auto& x : B.members) {
    std::array<Integer, 3> n;
    bool bad = false;
    for (int i = 0; i < 3; ++i) {
      if (fast) {
        long long s = li[i][0] * x[0] + li[i][1] * x[1] + li[i][2] * x[2];
        n[i] = Integer(static_cast<long>(s));
      } else {
        n[i] = inv(i, 0) * x[0] + inv(i, 1) * x[1] + inv(i, 2) * x[2];
      }
      if (abs(n[i]) > P.N[i]) bad = true;
    }
    if (bad) {
      out.ok = false;
      out.violations.push_back({x, n});
    }
  }
  return out;
}

namespace {

constexpr double kGuard = 1e-20;

// Smallest integer strictly above x; exact() supplies the big-float value near ties.
template <class F>
long int_above(const DD& x, F exact) {
  double r = std::nearbyint(x.hi);
  if (std::fabs(kernels::value(kernels::sub(x, DD{r, 0}))) < kGuard * (1 + std::fabs(x.hi)))
    return floor_to_integer(exact()).get_si() + 1;
  double fl = std::floor(x.hi);
  if (fl == x.hi && x.lo < 0) fl -= 1;
  return static_cast<long>(fl) + 1;
}

// Largest integer strictly below x.
template <class F>
long int_below(const DD& x, F exact) {
  double r = std::nearbyint(x.hi);
  if (std::fabs(kernels::value(kernels::sub(x, DD{r, 0}))) < kGuard * (1 + std::fabs(x.hi)))
    return ceil_to_integer(exact()).get_si() - 1;
  double cl = std::ceil(x.hi);
  if (cl == x.hi && x.lo > 0) cl += 1;
  return static_cast<long>(cl) - 1;
}

struct CountCtx {
  DD a, b, w1, w2, lo, hi;
  BigFloat A, B, W1, W2, LO, HI;
  bool a_neg;
};

DD dmax(const DD& x, const DD& y) { return kernels::less(x, y) ? y : x; }
DD dmin(const DD& x, const DD& y) { return kernels::less(x, y) ? x : y; }

void count_row(const CountCtx& c, long q, std::vector<Triple>& out) {
  using namespace kernels;
  BigFloat bq(q);
  DD qw2 = mul(c.w2, q), qw1 = mul(c.w1, q), qlo = mul(c.lo, q), qhi = mul(c.hi, q), bqd = mul(c.b, q);
  long p2a = int_above(sub(qlo, qw2), [&] { return bq * c.LO - bq * c.W2; });
  long p2b = int_below(add(qhi, qw2), [&] { return bq * c.HI + bq * c.W2; });
  for (long p2 = p2a; p2 <= p2b; ++p2) {
    DD p2d{static_cast<double>(p2), 0};
    DD L = dmax(sub(p2d, qw2), qlo), U = dmin(add(p2d, qw2), qhi);
    DD lowImg = add(mul(c.a, c.a_neg ? U : L), bqd);
    DD highImg = add(mul(c.a, c.a_neg ? L : U), bqd);
    auto bigL = [&] { return max(BigFloat(p2) - bq * c.W2, bq * c.LO); };
    auto bigU = [&] { return min(BigFloat(p2) + bq * c.W2, bq * c.HI); };
    long p1a = int_above(sub(lowImg, qw1), [&] { return c.A * (c.a_neg ? bigU() : bigL()) + c.B * bq - bq * c.W1; });
    long p1b = int_below(add(highImg, qw1), [&] { return c.A * (c.a_neg ? bigL() : bigU()) + c.B * bq + bq * c.W1; });
    for (long p1 = p1a; p1 <= p1b; ++p1) out.push_back({q, p1, p2});
  }
}

}  // namespace

NearLineCount count_near_line(long t, long m, const Real& a, const Real& b, const Interval& I, const PsiSpec& psi,
                              bool keep_triples) {
  if (t < 0 || t > 40) throw DomainError("count_near_line needs 0 <= t <= 40");
  if (I.hi < I.lo) throw DomainError("count_near_line needs a nonempty interval");
  long q0 = 1L << t;
  BigFloat ps = psi(q0);
  NearLineCount out;
  BigFloat root = sqrt(ps);
  out.bridge_bound = BigFloat(3L) * (BigFloat(1L) + abs(a.to_bigfloat())) * ldexp(root, std::labs(m));
  out.bridge_max = BigFloat(0L);
  if (ps.is_zero()) return out;

  BigFloat w = sqrt(BigFloat(2L) * ps) / BigFloat(q0);
  CountCtx c;
  c.A = a.to_bigfloat();
  c.B = b.to_bigfloat();
  c.W1 = ldexp(w, m);
  c.W2 = ldexp(w, -m);
  c.LO = I.lo.to_bigfloat();
  c.HI = I.hi.to_bigfloat();
  c.a = kernels::to_dd(c.A);
  c.b = kernels::to_dd(c.B);
  c.w1 = kernels::to_dd(c.W1);
  c.w2 = kernels::to_dd(c.W2);
  c.lo = kernels::to_dd(c.LO);
  c.hi = kernels::to_dd(c.HI);
  c.a_neg = a.sign() < 0;

  std::vector<std::vector<Triple>> rows(static_cast<std::size_t>(q0));
  kernels::parallel_for(q0, [&](long i) { count_row(c, q0 + i, rows[static_cast<std::size_t>(i)]); });

  for (const auto& row : rows) {
    for (const auto& tr : row) {
      // bridge: |p2 a + q b - p1| <= 3 (1 + |a|) 2^{|m|} sqrt(psi(2^t))
      BigFloat dev = abs(c.A * BigFloat(tr[2]) + c.B * BigFloat(tr[0]) - BigFloat(tr[1]));
      if (dev > out.bridge_max) out.bridge_max = dev;
      if (dev > out.bridge_bound)
        throw std::logic_error("bridge inequality violated at q=" + std::to_string(tr[0]));
      ++out.count;
      if (keep_triples) out.triples.push_back(tr);
    }
  }
  return out;
}

void write_ladder_csv(std::ostream& out, const std::vector<LadderRow>& rows) {
  out << "Q,delta,bohr_size,cover_size,minima_product,contained,regime_ok\n";
  for (const auto& r : rows)
    out << r.Q << ',' << r.delta.to_string(30) << ',' << r.bohr_size << ',' << r.cover_size.get_str() << ','
        << r.minima_product.to_string(30) << ',' << (r.contained ? "true" : "false") << ','
        << (r.regime_ok ? "true" : "false") << '\n';
}

}  // namespace mdlab
