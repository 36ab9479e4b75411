#include "mdlab/bigfloat.hpp"

#include "mdlab/errors.hpp"

#include <cstdlib>
#include <memory>
#include <string>

namespace mdlab {

namespace {

unsigned initial_precision() {
  if (const char* env = std::getenv("MDLAB_PRECISION_BITS")) {
    char* end = nullptr;
    unsigned long bits = std::strtoul(env, &end, 10);
    if (end != env && bits >= kMinPrecisionBits && bits <= (1u << 20)) return static_cast<unsigned>(bits);
  }
  return kDefaultPrecisionBits;
}

thread_local unsigned tl_precision = initial_precision();

}  // namespace

unsigned precision_bits() { return tl_precision; }

void set_precision_bits(unsigned bits) {
  if (bits < kMinPrecisionBits) {
    throw DomainError("precision must be at least " + std::to_string(kMinPrecisionBits) + " bits");
  }
  tl_precision = bits;
}

void set_thread_precision_bits(unsigned bits) { tl_precision = bits < 2 ? 2 : bits; }

ScopedPrecision::ScopedPrecision(unsigned bits) : saved_(tl_precision) { set_thread_precision_bits(bits); }
ScopedPrecision::~ScopedPrecision() { tl_precision = saved_; }

BigFloat::BigFloat() {
  mpfr_init2(value_, tl_precision);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(NoInit, mpfr_prec_t prec) { mpfr_init2(value_, prec); }

BigFloat::BigFloat(long v) {
  mpfr_init2(value_, tl_precision);
  mpfr_set_si(value_, v, MPFR_RNDN);
}

BigFloat::BigFloat(unsigned long v) {
  mpfr_init2(value_, tl_precision);
  mpfr_set_ui(value_, v, MPFR_RNDN);
}

BigFloat::BigFloat(double v) {
  mpfr_init2(value_, tl_precision);
  mpfr_set_d(value_, v, MPFR_RNDN);
}

BigFloat::BigFloat(const Integer& v) {
  mpfr_init2(value_, tl_precision);
  mpfr_set_z(value_, v.get_mpz_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const Rational& v) {
  mpfr_init2(value_, tl_precision);
  mpfr_set_q(value_, v.get_mpq_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  value_[0] = other.value_[0];
  other.value_[0]._mpfr_d = nullptr;
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    if (value_[0]._mpfr_d == nullptr) {
      mpfr_init2(value_, mpfr_get_prec(other.value_));
    } else if (mpfr_get_prec(value_) != mpfr_get_prec(other.value_)) {
      mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    }
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  if (this != &other) {
    std::swap(value_[0], other.value_[0]);
  }
  return *this;
}

BigFloat::~BigFloat() {
  if (value_[0]._mpfr_d != nullptr) mpfr_clear(value_);
}

BigFloat BigFloat::from_string(std::string_view text) {
  BigFloat r;
  std::string s(text);
  if (mpfr_set_str(r.value_, s.c_str(), 10, MPFR_RNDN) != 0) {
    throw DomainError("not a decimal number: '" + s + "'");
  }
  return r;
}

BigFloat BigFloat::infinity(int sign) {
  BigFloat r;
  mpfr_set_inf(r.value_, sign);
  return r;
}

std::string BigFloat::to_string(int digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(value_)) return "0";
  char* buf = nullptr;
  std::string fmt = "%." + std::to_string(digits > 0 ? digits : 1) + "Rg";
  if (mpfr_asprintf(&buf, fmt.c_str(), value_) < 0) throw RangeError("mpfr_asprintf failed");
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

BigFloat& BigFloat::operator+=(const BigFloat& o) {
  if (mpfr_get_prec(value_) != tl_precision) mpfr_prec_round(value_, tl_precision, MPFR_RNDN);
  mpfr_add(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator-=(const BigFloat& o) {
  if (mpfr_get_prec(value_) != tl_precision) mpfr_prec_round(value_, tl_precision, MPFR_RNDN);
  mpfr_sub(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator*=(const BigFloat& o) {
  if (mpfr_get_prec(value_) != tl_precision) mpfr_prec_round(value_, tl_precision, MPFR_RNDN);
  mpfr_mul(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator/=(const BigFloat& o) {
  if (mpfr_get_prec(value_) != tl_precision) mpfr_prec_round(value_, tl_precision, MPFR_RNDN);
  mpfr_div(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator*=(long o) {
  if (mpfr_get_prec(value_) != tl_precision) mpfr_prec_round(value_, tl_precision, MPFR_RNDN);
  mpfr_mul_si(value_, value_, o, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator*=(const Integer& o) {
  if (mpfr_get_prec(value_) != tl_precision) mpfr_prec_round(value_, tl_precision, MPFR_RNDN);
  mpfr_mul_z(value_, value_, o.get_mpz_t(), MPFR_RNDN);
  return *this;
}

BigFloat operator-(const BigFloat& a) {
  BigFloat r(BigFloat::NoInit{}, tl_precision);
  mpfr_neg(r.value_, a.value_, MPFR_RNDN);
  return r;
}
BigFloat operator+(const BigFloat& a, const BigFloat& b) {
  BigFloat r(BigFloat::NoInit{}, tl_precision);
  mpfr_add(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}
BigFloat operator-(const BigFloat& a, const BigFloat& b) {
  BigFloat r(BigFloat::NoInit{}, tl_precision);
  mpfr_sub(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}
BigFloat operator*(const BigFloat& a, const BigFloat& b) {
  BigFloat r(BigFloat::NoInit{}, tl_precision);
  mpfr_mul(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}
BigFloat operator/(const BigFloat& a, const BigFloat& b) {
  BigFloat r(BigFloat::NoInit{}, tl_precision);
  mpfr_div(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}
BigFloat operator*(const BigFloat& a, const Integer& b) {
  BigFloat r(BigFloat::NoInit{}, tl_precision);
  mpfr_mul_z(r.value_, a.value_, b.get_mpz_t(), MPFR_RNDN);
  return r;
}

BigFloat abs(const BigFloat& x) {
  BigFloat r;
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}
BigFloat sqrt(const BigFloat& x) {
  BigFloat r;
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}
BigFloat exp(const BigFloat& x) {
  BigFloat r;
  mpfr_clear_underflow();
  mpfr_clear_overflow();
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  if (!r.is_finite() || mpfr_underflow_p() || mpfr_overflow_p()) {
    mpfr_clear_flags();
    throw RangeError("exp(" + x.to_string(12) + ") is outside the BigFloat exponent range");
  }
  return r;
}
BigFloat log(const BigFloat& x) {
  if (x.sign() <= 0) throw DomainError("log of a non-positive value");
  BigFloat r;
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}
BigFloat pow(const BigFloat& x, const BigFloat& y) {
  BigFloat r;
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}
BigFloat ldexp(const BigFloat& x, long e) {
  BigFloat r;
  mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}
const BigFloat& min(const BigFloat& a, const BigFloat& b) { return b < a ? b : a; }
const BigFloat& max(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }

Integer floor_to_integer(const BigFloat& x) {
  if (!x.is_finite()) throw RangeError("floor of a non-finite value");
  Integer r;
  mpfr_get_z(r.get_mpz_t(), x.get(), MPFR_RNDD);
  return r;
}

Integer ceil_to_integer(const BigFloat& x) {
  if (!x.is_finite()) throw RangeError("ceil of a non-finite value");
  Integer r;
  mpfr_get_z(r.get_mpz_t(), x.get(), MPFR_RNDU);
  return r;
}

Integer round_to_integer(const BigFloat& x) {
  if (!x.is_finite()) throw RangeError("round of a non-finite value");
  BigFloat r(BigFloat(0L));
  mpfr_set_prec(r.get(), x.precision());
  mpfr_round(r.get(), x.get());
  Integer z;
  mpfr_get_z(z.get_mpz_t(), r.get(), MPFR_RNDN);
  return z;
}

BigFloat nearest_int_distance(const BigFloat& x) {
  BigFloat r = x;
  mpfr_prec_round(r.get(), precision_bits() > static_cast<unsigned>(x.precision()) ? precision_bits() : x.precision(),
                  MPFR_RNDN);
  mpfr_frac(r.get(), x.get(), MPFR_RNDN);  // r in (-1, 1), same sign as x
  mpfr_abs(r.get(), r.get(), MPFR_RNDN);
  BigFloat one_minus = BigFloat(1L) - r;
  if (one_minus < r) r = one_minus;
  return r;
}

Rational to_rational(const BigFloat& x) {
  if (!x.is_finite()) throw RangeError("non-finite value has no rational form");
  if (x.is_zero()) return Rational(0);
  mpz_t m;
  mpz_init(m);
  mpfr_exp_t e = mpfr_get_z_2exp(m, x.get());
  Rational r;
  mpq_set_z(r.get_mpq_t(), m);
  mpz_clear(m);
  if (e >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  r.canonicalize();
  return r;
}

}  // namespace mdlab
