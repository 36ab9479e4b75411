#pragma once

#include "mdlab/exp_poly.hpp"
#include "mdlab/lattice3.hpp"
#include "mdlab/real.hpp"

namespace mdlab {

// y = a*x + b.
struct Line {
  Real a;
  Real b;
  Real f(const Real& x) const { return a * x + b; }
  BigFloat f(const BigFloat& x) const { return a.to_bigfloat() * x + b.to_bigfloat(); }
};

struct FlowPoint {
  Real t;
  Real s;
  Line line;
  Real x;
  Real epsilon = Real::rational(1, 2);

  // DomainError unless t, s >= 0 and 0 < epsilon < 1.
  void validate() const;
};

// Exponents below are linear forms in the symbolic (t, s), written as ExpArg
// in half units: ExpArg{2, 0} is t, ExpArg{1, 2} is s + t/2.
inline constexpr ExpArg kT{2, 0};
inline constexpr ExpArg kS{0, 2};

// Upper unipotent with last column (y, x, 1).
ExpMatrix u_mat(const ExpPoly& y, const ExpPoly& x);
// diag(e^T, e^S, e^{-T-S}).
ExpMatrix a_mat(ExpArg T = kT, ExpArg S = kS);
// diag(e^{2T}, e^{-T}, e^{-T}).
ExpMatrix xi_mat(ExpArg T);
// diag(1, e^L, e^{-L}).
ExpMatrix d_small(ExpArg lambda);
// u(r e2).
ExpMatrix v_small(const ExpPoly& r);

// (g, v) = [[1, v], [0, g]] with v a row vector.
ExpMatrix aff(const std::array<std::array<ExpPoly, 2>, 2>& g, const std::array<ExpPoly, 2>& v);

// Working precision needed so that a(t,s)u(.) keeps its short vectors resolved.
unsigned flow_precision_bits(double t, double s);

// Raises the thread precision to flow_precision_bits(t, s) if it is lower.
class FlowPrecision {
public:
  FlowPrecision(double t, double s);

private:
  ScopedPrecision scope_;
};

// Basis a(t,s) u(f(x), x); RangeError when the thread precision is below
// flow_precision_bits(t, s).
Lattice3 orbit_lattice(const FlowPoint& p);
// Same lattice from precomputed e^t, e^s and the line value f = a x + b.
Mat3<BigFloat> orbit_basis(const BigFloat& et, const BigFloat& es, const BigFloat& f, const BigFloat& x);

// W = a(t,s) u(phi(x0 + r e^{-2s-t})) [u(r e2) a(t,s) u(phi(x0))]^{-1}, symbolic in (t, s).
ExpMatrix conjugation_residual(const Line& line, const Real& x0, const Real& r);

// B A^{-1} with A = a(t,s) u(phi(x)), B = xi(t/2) d(s+t/2) v(x) (I, (-a, b)).
ExpMatrix affine_factorization_residual(const Line& line, const Real& x);

// True when m - I has exactly one nonzero entry, at (row, col), equal to coeff * e^{arg}.
bool is_single_term_unipotent(const ExpMatrix& m, int row, int col, const Real& coeff, ExpArg arg);

}  // namespace mdlab
