#include "mdlab/flows.hpp"

#include "mdlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mdlab {

void FlowPoint::validate() const {
  if (t.sign() < 0 || s.sign() < 0) throw DomainError("flow point needs t, s >= 0");
  if (epsilon.sign() <= 0 || epsilon >= Real(1)) throw DomainError("epsilon must lie in (0, 1)");
}

ExpMatrix u_mat(const ExpPoly& y, const ExpPoly& x) {
  ExpMatrix m = ExpMatrix::identity();
  m(0, 2) = y;
  m(1, 2) = x;
  return m;
}

namespace {

ExpPoly e(ExpArg arg) { return ExpPoly(Real(1), arg); }
ExpArg twice(ExpArg a) { return {2 * a.kt, 2 * a.ks}; }

}  // namespace

ExpMatrix a_mat(ExpArg T, ExpArg S) { return ExpMatrix::diag(e(T), e(S), e(-(T + S))); }

ExpMatrix xi_mat(ExpArg T) { return ExpMatrix::diag(e(twice(T)), e(-T), e(-T)); }

ExpMatrix d_small(ExpArg lambda) { return ExpMatrix::diag(ExpPoly(1), e(lambda), e(-lambda)); }

ExpMatrix v_small(const ExpPoly& r) { return u_mat(ExpPoly(), r); }

ExpMatrix aff(const std::array<std::array<ExpPoly, 2>, 2>& g, const std::array<ExpPoly, 2>& v) {
  ExpMatrix m = ExpMatrix::zero();
  m(0, 0) = ExpPoly(1);
  m(0, 1) = v[0];
  m(0, 2) = v[1];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i + 1, j + 1) = g[i][j];
  return m;
}

unsigned flow_precision_bits(double t, double s) {
  double need = 1.4426950408889634 * 2.0 * (std::fabs(t) + std::fabs(s)) + 64.0;
  return std::max(kMinPrecisionBits, static_cast<unsigned>(std::ceil(need)));
}

FlowPrecision::FlowPrecision(double t, double s)
    : scope_(std::max(precision_bits(), flow_precision_bits(t, s))) {}

Mat3<BigFloat> orbit_basis(const BigFloat& et, const BigFloat& es, const BigFloat& f, const BigFloat& x) {
  Mat3<BigFloat> g = Mat3<BigFloat>::zero();
  g(0, 0) = et;
  g(0, 2) = et * f;
  g(1, 1) = es;
  g(1, 2) = es * x;
  g(2, 2) = BigFloat(1L) / (et * es);
  return g;
}

Lattice3 orbit_lattice(const FlowPoint& p) {
  double t = p.t.to_double(), s = p.s.to_double();
  if (precision_bits() < flow_precision_bits(t, s))
    throw RangeError("working precision too low for a(t,s) at t=" + p.t.to_string(8) + ", s=" + p.s.to_string(8));
  BigFloat et = exp(p.t.to_bigfloat()), es = exp(p.s.to_bigfloat());
  BigFloat x = p.x.to_bigfloat();
  Lattice3 L{orbit_basis(et, es, p.line.f(p.x).to_bigfloat(), x), ""};
  L.provenance = "a(" + p.t.repr() + "," + p.s.repr() + ")u(phi(" + p.x.repr() + ")) line (" + p.line.a.repr() +
                 "," + p.line.b.repr() + ")";
  return L;
}

ExpMatrix conjugation_residual(const Line& line, const Real& x0, const Real& r) {
  if (abs(r) > Real(3)) throw DomainError("conjugation_residual needs |r| <= 3");
  ExpPoly x1 = ExpPoly(x0) + ExpPoly(r, ExpArg{-2, -4});
  ExpPoly y1 = ExpPoly(line.a) * x1 + ExpPoly(line.b);
  ExpMatrix lhs = a_mat() * u_mat(y1, x1);
  ExpMatrix rhs = v_small(ExpPoly(r)) * a_mat() * u_mat(ExpPoly(line.f(x0)), ExpPoly(x0));
  return lhs * inverse(rhs);
}

ExpMatrix affine_factorization_residual(const Line& line, const Real& x) {
  ExpMatrix A = a_mat() * u_mat(ExpPoly(line.f(x)), ExpPoly(x));
  std::array<std::array<ExpPoly, 2>, 2> id{{{ExpPoly(1), ExpPoly()}, {ExpPoly(), ExpPoly(1)}}};
  ExpMatrix shift = aff(id, {ExpPoly(-line.a), ExpPoly(line.b)});
  ExpMatrix B = xi_mat(ExpArg{1, 0}) * d_small(ExpArg{1, 2}) * v_small(ExpPoly(x)) * shift;
  return B * inverse(A);
}

bool is_single_term_unipotent(const ExpMatrix& m, int row, int col, const Real& coeff, ExpArg arg) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      ExpPoly want = (i == j) ? ExpPoly(1) : ExpPoly();
      if (i == row && j == col) want = want + ExpPoly(coeff, arg);
      if (m(i, j) != want) return false;
    }
  return true;
}

}  // namespace mdlab
