#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace mdlab {

using Integer = mpz_class;
using Rational = mpq_class;

inline constexpr unsigned kMinPrecisionBits = 128;
inline constexpr unsigned kDefaultPrecisionBits = 192;

// Working precision (bits) for every BigFloat produced on the calling thread.
// Thread-local: parallel kernels copy the caller's value into each worker.
unsigned precision_bits();
void set_precision_bits(unsigned bits);

// Like set_precision_bits but without the global floor; used for internal
// escalation and restoration.
void set_thread_precision_bits(unsigned bits);

class ScopedPrecision {
public:
  explicit ScopedPrecision(unsigned bits);
  ~ScopedPrecision();
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
  unsigned saved_;
};

/// RAII wrapper over an MPFR value. Results of arithmetic are rounded to the
/// calling thread's working precision.
class BigFloat {
public:
  BigFloat();
  BigFloat(int v) : BigFloat(static_cast<long>(v)) {}
  BigFloat(long v);
  BigFloat(long long v) : BigFloat(static_cast<long>(v)) {}
  BigFloat(unsigned long v);
  BigFloat(double v);
  BigFloat(const Integer& v);
  BigFloat(const Rational& v);

  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  static BigFloat from_string(std::string_view text);
  static BigFloat infinity(int sign = 1);

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  bool is_inf() const { return mpfr_inf_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(value_, MPFR_RNDN); }
  // Decimal rendering with the given number of significant digits.
  std::string to_string(int digits = 30) const;

  BigFloat& operator+=(const BigFloat& o);
  BigFloat& operator-=(const BigFloat& o);
  BigFloat& operator*=(const BigFloat& o);
  BigFloat& operator/=(const BigFloat& o);
  BigFloat& operator*=(long o);
  BigFloat& operator*=(const Integer& o);

  friend BigFloat operator-(const BigFloat& a);
  friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator*(const BigFloat& a, const Integer& b);
  friend BigFloat operator*(const Integer& a, const BigFloat& b) { return b * a; }

  friend int compare(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.value_, b.value_); }
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend bool operator!=(const BigFloat& a, const BigFloat& b) { return !(a == b); }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.value_, b.value_) != 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.value_, b.value_) != 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.value_, b.value_) != 0; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.value_, b.value_) != 0; }

private:
  struct NoInit {};
  explicit BigFloat(NoInit, mpfr_prec_t prec);

  mpfr_t value_;
};

BigFloat abs(const BigFloat& x);
BigFloat sqrt(const BigFloat& x);
BigFloat exp(const BigFloat& x);
BigFloat log(const BigFloat& x);
BigFloat pow(const BigFloat& x, const BigFloat& y);
BigFloat ldexp(const BigFloat& x, long e);
const BigFloat& min(const BigFloat& a, const BigFloat& b);
const BigFloat& max(const BigFloat& a, const BigFloat& b);

Integer floor_to_integer(const BigFloat& x);
Integer ceil_to_integer(const BigFloat& x);
// Nearest integer, halves rounded away from zero.
Integer round_to_integer(const BigFloat& x);

// Distance to the nearest integer at working precision.
BigFloat nearest_int_distance(const BigFloat& x);

// Exact binary value of x as a rational (x must be finite).
Rational to_rational(const BigFloat& x);

}  // namespace mdlab
