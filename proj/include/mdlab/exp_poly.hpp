#pragma once

#include "mdlab/mat3.hpp"
#include "mdlab/real.hpp"

#include <map>
#include <string>
#include <utility>

namespace mdlab {

// Exponent (kt/2)*t + (ks/2)*s in half units.
struct ExpArg {
  int kt = 0;
  int ks = 0;
  friend bool operator<(const ExpArg& a, const ExpArg& b) { return std::pair(a.kt, a.ks) < std::pair(b.kt, b.ks); }
  friend bool operator==(const ExpArg& a, const ExpArg& b) { return a.kt == b.kt && a.ks == b.ks; }
  ExpArg operator-() const { return {-kt, -ks}; }
  friend ExpArg operator+(const ExpArg& a, const ExpArg& b) { return {a.kt + b.kt, a.ks + b.ks}; }
};

// Finite sum of coeff * e^{(kt/2) t + (ks/2) s}; zero coefficients never stored.
class ExpPoly {
public:
  ExpPoly() = default;
  ExpPoly(int c) : ExpPoly(Real(c)) {}
  ExpPoly(const Real& c, ExpArg e = {});

  static ExpPoly monomial(const Real& c, int kt, int ks) { return ExpPoly(c, ExpArg{kt, ks}); }

  const std::map<ExpArg, Real>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  // Coefficient of e^{arg}; zero when absent.
  Real coeff(ExpArg arg) const;

  ExpPoly operator-() const;
  friend ExpPoly operator+(const ExpPoly& a, const ExpPoly& b);
  friend ExpPoly operator-(const ExpPoly& a, const ExpPoly& b) { return a + (-b); }
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);
  friend bool operator==(const ExpPoly& a, const ExpPoly& b);
  friend bool operator!=(const ExpPoly& a, const ExpPoly& b) { return !(a == b); }

  // Inverse of a single term; DomainError otherwise.
  ExpPoly monomial_inverse() const;

  // Numeric value at (t, s); RangeError when an exponential leaves the big-float range.
  BigFloat eval(const Real& t, const Real& s) const;

  std::string repr() const;

private:
  std::map<ExpArg, Real> terms_;
};

using ExpMatrix = Mat3<ExpPoly>;

// Exact inverse when det(m) is a single term.
ExpMatrix inverse(const ExpMatrix& m);
Mat3<BigFloat> eval(const ExpMatrix& m, const Real& t, const Real& s);
std::string repr(const ExpMatrix& m);

BigFloat exp_poly_eval(const ExpPoly& e, const Real& t, const Real& s);

}  // namespace mdlab
