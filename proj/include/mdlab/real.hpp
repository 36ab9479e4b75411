#pragma once

#include "mdlab/bigfloat.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace mdlab {

// p + q*sqrt(d), d squarefree >= 2, q != 0.
struct Surd {
  Rational p;
  Rational q;
  unsigned long d = 2;
};

class Real {
public:
  enum class Kind { rational, surd, bigfloat };

  Real() : v_(Rational(0)) {}
  Real(int v) : v_(Rational(v)) {}
  Real(long v) : v_(Rational(v)) {}
  Real(const Integer& v) : v_(Rational(v)) {}
  Real(const Rational& v) : v_(v) {}
  Real(const BigFloat& v) : v_(v) {}

  static Real rational(long num, long den);
  // Normalizes d to its squarefree part; collapses to Rational when q == 0 or d is a square.
  static Real surd(const Rational& p, const Rational& q, unsigned long d);
  static Real sqrt_of(unsigned long d) { return surd(Rational(0), Rational(1), d); }
  static Real golden_ratio() { return surd(Rational(1, 2), Rational(1, 2), 5); }

  Kind kind() const { return static_cast<Kind>(v_.index()); }
  bool is_exact() const { return kind() != Kind::bigfloat; }
  const Rational& as_rational() const { return std::get<Rational>(v_); }
  const Surd& as_surd() const { return std::get<Surd>(v_); }
  const BigFloat& as_bigfloat() const { return std::get<BigFloat>(v_); }

  // Value rounded to the calling thread's working precision.
  BigFloat to_bigfloat() const;
  double to_double() const;

  int sign() const;
  bool is_zero() const;
  bool is_integer() const;

  std::string to_string(int digits = 30) const;
  // Exact textual form for rationals and surds ("p/q", "p+q*sqrt(d)"); decimal for big-floats.
  std::string repr() const;

  Real operator-() const;
  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  Real& operator+=(const Real& o) { return *this = *this + o; }
  Real& operator-=(const Real& o) { return *this = *this - o; }
  Real& operator*=(const Real& o) { return *this = *this * o; }

  // Exact whenever both operands are exact; big-float comparison otherwise.
  friend int compare(const Real& a, const Real& b);
  friend bool operator==(const Real& a, const Real& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Real& a, const Real& b) { return compare(a, b) != 0; }
  friend bool operator<(const Real& a, const Real& b) { return compare(a, b) < 0; }
  friend bool operator<=(const Real& a, const Real& b) { return compare(a, b) <= 0; }
  friend bool operator>(const Real& a, const Real& b) { return compare(a, b) > 0; }
  friend bool operator>=(const Real& a, const Real& b) { return compare(a, b) >= 0; }

private:
  std::variant<Rational, Surd, BigFloat> v_;
};

Real abs(const Real& x);
Integer floor(const Real& x);
Integer ceil(const Real& x);
Real frac_part(const Real& x);  // x - floor(x), in [0, 1)

// Distance to the nearest integer, in [0, 1/2]. Exact for rationals and surds;
// a half-integer returns exactly 1/2.
Real frac_dist(const Real& x);

struct CfExpansion {
  std::vector<Integer> partial_quotients;              // a_0, a_1, ...
  std::vector<std::pair<Integer, Integer>> convergents;  // (p_k, q_k)
  bool terminated = false;                              // x is rational and the expansion ended
};

// Continued fraction with up to n+1 partial quotients a_0..a_n.
CfExpansion cf_expansion(const Real& x, int n);

// Parses "7/3", "-0.125", "sqrt2", "sqrt(3)", "phi", "1+2*sqrt(5)", "(1+sqrt(5))/2", "phi-1".
// Decimals with at most 15 significant digits are exact rationals; longer ones are
// rounded to a big-float and a warning is stored in *warning.
Real parse_real(std::string_view text, std::string* warning = nullptr);

}  // namespace mdlab
