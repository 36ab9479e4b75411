#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mdlab/dioph.hpp"
#include "mdlab/errors.hpp"
#include "oracles/brute_dioph.hpp"

#include <cmath>
#include <sstream>

using namespace mdlab;

namespace {

const Real r2 = Real::sqrt_of(2);
const Real r3 = Real::sqrt_of(3);

}  // namespace

TEST_CASE("diophantine_margin") {
  auto half = diophantine_margin({Real::rational(1, 2)}, Real::rational(1, 10), 10);
  CHECK(half.margin.is_zero());
  CHECK(half.argmin_q == 2);

  auto third = diophantine_margin({Real::rational(1, 3)}, Real::rational(1, 10), 10);
  CHECK(third.margin.is_zero());
  CHECK(third.argmin_q == 3);

  auto s2 = diophantine_margin({r2}, Real::rational(1, 10), 10000);
  CHECK(s2.margin.sign() > 0);
  auto s23 = diophantine_margin({r2, r3}, Real::rational(1, 5), 10000);
  CHECK(s23.margin.sign() > 0);

  // independent recomputation at the reported argmin
  BigFloat q(s2.argmin_q);
  BigFloat direct = pow(q, BigFloat(Rational(11, 10))) * oracle::dist(r2.to_bigfloat() * q);
  CHECK(abs(direct - s2.margin) <= s2.margin * ldexp(BigFloat(1L), -100));
}

TEST_CASE("dual exponent") {
  auto rel = omega_dual_lower(Real::rational(1, 3), Real::rational(1, 7), 25);
  CHECK(rel.infinite);
  Integer x = rel.witnesses.back().datum[0], y = rel.witnesses.back().datum[1];
  CHECK((Real(x) * Real::rational(1, 3) + Real(y) * Real::rational(1, 7)).is_integer());

  auto e = omega_dual_lower(r2, r3, 1000);
  CHECK_FALSE(e.infinite);
  double w = e.lower_bound.to_double();
  CHECK(w >= 2.0);
  CHECK(w < 5.0);
  MESSAGE("omega* lower bound for (sqrt2, sqrt3), H <= 1000: " << w);

  auto line = omega_dual_lower(r2, Real(1) - r2, 50);
  CHECK(line.infinite);

  // monotone in Hmax and equal to the plain loop
  BigFloat prev(0L);
  for (long H : {10L, 40L, 120L}) {
    auto est = omega_dual_lower(r2, r3, H);
    CHECK(est.lower_bound >= prev);
    prev = est.lower_bound;
    CHECK(abs(est.lower_bound - oracle::dual_best(r2, r3, H)) <= ldexp(BigFloat(1L), -120));
  }
}

TEST_CASE("simultaneous and multiplicative exponents") {
  CHECK(omega_simul_lower(Real::rational(1, 3), Real::rational(2, 5), 100).infinite);
  CHECK(omega_mult_lower(Real::rational(1, 3), r2, 100).infinite);

  auto s = omega_simul_lower(r2, r3, 100000);
  CHECK(s.lower_bound.to_double() >= 0.45);
  MESSAGE("omega lower bound for (sqrt2, sqrt3), N <= 1e5: " << s.lower_bound.to_double());

  Real phi = Real::golden_ratio();
  for (auto [a, b] : {std::pair{r2, r3}, std::pair{phi, phi - Real(1)}, std::pair{r2 * Real(3), Real::sqrt_of(5)}}) {
    auto sim = omega_simul_lower(a, b, 3000);
    auto mul = omega_mult_lower(a, b, 3000);
    CHECK(BigFloat(2L) * sim.lower_bound <= mul.lower_bound);
    // witness transfer: the simultaneous witness n certifies twice its quality multiplicatively
    Witness wn = sim.witnesses.back();
    CHECK(witness_quality(ExponentKind::multiplicative, a, b, wn) >= BigFloat(2L) * wn.w);
    CHECK(abs(sim.lower_bound - oracle::n_best(a, b, 3000, false)) <= ldexp(BigFloat(1L), -120));
    CHECK(abs(mul.lower_bound - oracle::n_best(a, b, 3000, true)) <= ldexp(BigFloat(1L), -120));
  }

  BigFloat prev(0L);
  for (long N : {100L, 1000L, 10000L}) {
    auto m = omega_mult_lower(r2, r3, N);
    CHECK(m.lower_bound >= prev);
    prev = m.lower_bound;
  }
}

TEST_CASE("witnesses recertify at doubled precision") {
  auto d = omega_dual_lower(r2, r3, 300);
  auto s = omega_simul_lower(r2, r3, 5000);
  auto m = omega_mult_lower(r2, r3, 5000);
  ScopedPrecision hi(2 * precision_bits());
  for (const auto* est : {&d, &s, &m}) {
    for (const auto& w : est->witnesses) {
      BigFloat again = witness_quality(est->kind, r2, r3, w);
      CHECK(abs(again - w.w).to_double() < 1e-6);
    }
  }
}

TEST_CASE("b_s_value") {
  auto zero = b_s_value(Real(0), Real(0), Real(0));
  CHECK(zero.value == BigFloat(1L));
  CHECK(zero.q_star == 1);
  CHECK(zero.certified);

  auto half = b_s_value(Real::rational(1, 2), Real::rational(1, 2), Real(2));
  CHECK(half.certified);
  CHECK(half.value == oracle::bs_brute(Real::rational(1, 2), Real::rational(1, 2), Real(2), 1000));

  for (const Real& s : {Real(0), Real(1), Real(3), Real(8)}) {
    auto r = b_s_value(r2, r3, s);
    CHECK(r.certified);
    CHECK(abs(r.value - oracle::bs_brute(r2, r3, s, 1000)) <= ldexp(BigFloat(1L), -150));
    // stopping rule: 1/q^2 below the maximum from stop_q on
    BigFloat sq(r.stop_q);
    CHECK(BigFloat(1L) / (sq * sq) < r.value);
  }
  BigFloat prev = BigFloat::infinity();
  for (int s = 0; s <= 12; ++s) {
    auto r = b_s_value(r2, Real::rational(1, 3), Real(s));
    CHECK(r.value <= prev);
    prev = r.value;
  }
  auto capped = b_s_value(r2, r3, Real(0), 1);
  CHECK_FALSE(capped.certified);
}

TEST_CASE("gallagher_scan") {
  auto half = gallagher_scan(Real::rational(1, 2), r3, 100);
  CHECK(half.min_value.is_zero());
  CHECK(half.argmin == 2);

  auto fast = gallagher_scan(r2, r2, 10000);
  auto ref = gallagher_scan_reference(r2, r2, 10000);
  REQUIRE(fast.trace.size() == ref.trace.size());
  for (std::size_t i = 0; i < ref.trace.size(); ++i) {
    CHECK(fast.trace[i].n == ref.trace[i].n);
    CHECK(fast.trace[i].value == ref.trace[i].value);
  }
  CHECK(fast.min_value.sign() > 0);
  {
    ScopedPrecision hi(2 * precision_bits());
    BigFloat n(fast.argmin), ln = log(n);
    BigFloat d = oracle::dist(r2.to_bigfloat() * n);
    BigFloat again = n * ln * ln * d * d;
    CHECK(abs(again - fast.min_value) <= fast.min_value * ldexp(BigFloat(1L), -150));
  }

  // along the line alpha = a beta + b the running minimum only goes down
  Real beta = Real::rational(1234567, 8388608);
  Real alpha = r2 * beta + r3;
  auto line = gallagher_scan(alpha, beta, 200000);
  for (std::size_t i = 1; i < line.trace.size(); ++i) CHECK(line.trace[i].value < line.trace[i - 1].value);
  auto line_ref = gallagher_scan_reference(alpha, beta, 20000);
  auto line_short = gallagher_scan(alpha, beta, 20000);
  CHECK(line_short.argmin == line_ref.argmin);
  CHECK(line_short.min_value == line_ref.min_value);
  CHECK(line.min_value <= line_short.min_value);

  std::ostringstream csv;
  write_trace_csv(csv, half.trace);
  CHECK(csv.str() == "n,value\n2,0\n");
}

TEST_CASE("psi_count") {
  CHECK(psi_count(r2, r3, PsiSpec::constant(Real(0)), 1000).count == 0);
  CHECK(psi_count(r2, r3, PsiSpec::constant(Real(1)), 1000).count == 999);

  PsiSpec psi = PsiSpec::closed(Real(1), Real(3));
  Real beta = Real::rational(3, 7) + r2 * Real::rational(1, 100);
  Real alpha = r2 * beta + r3;
  auto c = psi_count(alpha, beta, psi, 100000);
  long brute = 0;
  BigFloat A = alpha.to_bigfloat(), B = beta.to_bigfloat();
  for (long n = 2; n <= 100000; ++n) {
    BigFloat bn(n);
    if (oracle::dist(A * bn) * oracle::dist(B * bn) < BigFloat(1L) / (bn * pow(log(bn), BigFloat(3L)))) ++brute;
  }
  CHECK(c.count == brute);
  MESSAGE("psi_count on the line, N = 1e5: " << c.count);

  CHECK_THROWS_AS(PsiSpec::from_table({{2, Real(1)}, {5, Real(2)}}), DomainError);
  PsiSpec t = PsiSpec::from_table({{2, Real::rational(1, 2)}, {10, Real::rational(1, 10)}});
  CHECK(t(3) == BigFloat(Rational(1, 2)));
  CHECK(t(11) == BigFloat(Rational(1, 10)));
}
