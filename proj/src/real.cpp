#include "mdlab/real.hpp"

#include "mdlab/errors.hpp"

#include <cctype>
#include <string>

namespace mdlab {

namespace {

struct Exact {
  Rational p;
  Rational q;  // 0 for a plain rational
  unsigned long d = 0;
};

Exact exact_parts(const Real& x) {
  if (x.kind() == Real::Kind::rational) return {x.as_rational(), Rational(0), 0};
  const Surd& s = x.as_surd();
  return {s.p, s.q, s.d};
}

bool compatible(const Exact& a, const Exact& b) { return a.d == 0 || b.d == 0 || a.d == b.d; }

int surd_sign(const Rational& p, const Rational& q, unsigned long d) {
  int sp = sgn(p);
  int sq = sgn(q);
  if (sq == 0 || d == 0) return sp;
  if (sp == 0 || sp == sq) return sq;
  Rational p2 = p * p;
  Rational q2d = q * q * Rational(static_cast<long>(d));
  int c = cmp(p2, q2d);
  return c > 0 ? sp : sq;  // c == 0 impossible for non-square d
}

unsigned long squarefree_split(unsigned long d, unsigned long& outside) {
  outside = 1;
  for (unsigned long f = 2; f * f <= d; ++f) {
    while (d % (f * f) == 0) {
      d /= f * f;
      outside *= f;
    }
  }
  return d;
}

BigFloat surd_value(const Surd& s) {
  BigFloat root = sqrt(BigFloat(s.d));
  return BigFloat(s.p) + BigFloat(s.q) * root;
}

std::string rational_repr(const Rational& r) { return r.get_str(); }

}  // namespace

Real Real::rational(long num, long den) {
  if (den == 0) throw DomainError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return Real(r);
}

Real Real::surd(const Rational& p, const Rational& q, unsigned long d) {
  if (d == 0 || q == 0) return Real(p);
  unsigned long outside = 1;
  unsigned long core = squarefree_split(d, outside);
  Rational qq = q * Rational(static_cast<long>(outside));
  if (core == 1) return Real(Rational(p + qq));
  Real r;
  r.v_ = Surd{p, qq, core};
  return r;
}

BigFloat Real::to_bigfloat() const {
  switch (kind()) {
    case Kind::rational: return BigFloat(as_rational());
    case Kind::surd: return surd_value(as_surd());
    default: {
      BigFloat r = as_bigfloat();
      if (static_cast<unsigned>(r.precision()) != precision_bits()) mpfr_prec_round(r.get(), precision_bits(), MPFR_RNDN);
      return r;
    }
  }
}

double Real::to_double() const {
  if (kind() == Kind::rational) return as_rational().get_d();
  if (kind() == Kind::bigfloat) return as_bigfloat().to_double();
  ScopedPrecision guard(128);
  return to_bigfloat().to_double();
}

int Real::sign() const {
  switch (kind()) {
    case Kind::rational: return sgn(as_rational());
    case Kind::surd: return surd_sign(as_surd().p, as_surd().q, as_surd().d);
    default: return as_bigfloat().sign();
  }
}

bool Real::is_zero() const { return sign() == 0; }

bool Real::is_integer() const {
  if (kind() == Kind::rational) return as_rational().get_den() == 1;
  if (kind() == Kind::surd) return false;
  return mpfr_integer_p(as_bigfloat().get()) != 0;
}

std::string Real::to_string(int digits) const {
  if (kind() == Kind::rational && as_rational().get_den() == 1) return as_rational().get_num().get_str();
  return to_bigfloat().to_string(digits);
}

std::string Real::repr() const {
  switch (kind()) {
    case Kind::rational: return rational_repr(as_rational());
    case Kind::surd: {
      const Surd& s = as_surd();
      std::string out;
      if (s.p != 0) out = rational_repr(s.p);
      std::string q = rational_repr(s.q);
      if (s.q == 1) {
        out += out.empty() ? "" : "+";
      } else if (s.q == -1) {
        out += "-";
      } else {
        if (!out.empty() && sgn(s.q) > 0) out += "+";
        out += (s.q.get_den() == 1 ? q : "(" + q + ")") + "*";
      }
      return out + "sqrt(" + std::to_string(s.d) + ")";
    }
    default: return as_bigfloat().to_string(static_cast<int>(as_bigfloat().precision() * 0.30103) + 2);
  }
}

Real Real::operator-() const {
  switch (kind()) {
    case Kind::rational: return Real(Rational(-as_rational()));
    case Kind::surd: return surd(-as_surd().p, -as_surd().q, as_surd().d);
    default: return Real(-as_bigfloat());
  }
}

Real operator+(const Real& a, const Real& b) {
  if (a.is_exact() && b.is_exact()) {
    Exact x = exact_parts(a), y = exact_parts(b);
    if (compatible(x, y)) return Real::surd(x.p + y.p, x.q + y.q, x.d ? x.d : y.d);
  }
  return Real(a.to_bigfloat() + b.to_bigfloat());
}

Real operator-(const Real& a, const Real& b) { return a + (-b); }

Real operator*(const Real& a, const Real& b) {
  if (a.is_exact() && b.is_exact()) {
    Exact x = exact_parts(a), y = exact_parts(b);
    if (compatible(x, y)) {
      unsigned long d = x.d ? x.d : y.d;
      Rational p = x.p * y.p + x.q * y.q * Rational(static_cast<long>(d));
      Rational q = x.p * y.q + x.q * y.p;
      return Real::surd(p, q, d);
    }
  }
  return Real(a.to_bigfloat() * b.to_bigfloat());
}

Real operator/(const Real& a, const Real& b) {
  if (b.is_zero()) throw DomainError("division by zero");
  if (b.is_exact()) {
    Exact y = exact_parts(b);
    Real inv;
    if (y.d == 0) {
      inv = Real(Rational(1 / y.p));
    } else {
      Rational norm = y.p * y.p - y.q * y.q * Rational(static_cast<long>(y.d));
      inv = Real::surd(y.p / norm, -y.q / norm, y.d);
    }
    if (a.is_exact()) return a * inv;
  }
  return Real(a.to_bigfloat() / b.to_bigfloat());
}

int compare(const Real& a, const Real& b) {
  if (a.is_exact() && b.is_exact()) {
    Exact x = exact_parts(a), y = exact_parts(b);
    if (compatible(x, y)) return surd_sign(x.p - y.p, x.q - y.q, x.d ? x.d : y.d);
    // Surds over different fields are never equal; refine until the sign is resolved.
    for (unsigned bits = precision_bits() < 128 ? 128 : precision_bits(); bits <= (1u << 16); bits *= 2) {
      ScopedPrecision guard(bits);
      BigFloat va = a.to_bigfloat(), vb = b.to_bigfloat();
      BigFloat diff = va - vb;
      BigFloat slack = ldexp(abs(va) + abs(vb), -static_cast<long>(bits) + 4);
      if (abs(diff) > slack) return diff.sign();
    }
    throw RangeError("could not separate two surds");
  }
  return compare(a.to_bigfloat(), b.to_bigfloat());
}

Real abs(const Real& x) { return x.sign() < 0 ? -x : x; }

Integer floor(const Real& x) {
  switch (x.kind()) {
    case Real::Kind::rational: {
      Integer r;
      mpz_fdiv_q(r.get_mpz_t(), x.as_rational().get_num_mpz_t(), x.as_rational().get_den_mpz_t());
      return r;
    }
    case Real::Kind::surd: {
      Integer k;
      {
        ScopedPrecision guard(precision_bits() < 128 ? 128 : precision_bits());
        k = floor_to_integer(x.to_bigfloat());
      }
      while ((x - Real(k)).sign() < 0) k -= 1;
      while ((x - Real(Integer(k + 1))).sign() >= 0) k += 1;
      return k;
    }
    default: return floor_to_integer(x.as_bigfloat());
  }
}

Integer ceil(const Real& x) { return -floor(-x); }

Real frac_part(const Real& x) { return x - Real(floor(x)); }

Real frac_dist(const Real& x) {
  if (x.kind() == Real::Kind::bigfloat) return Real(nearest_int_distance(x.as_bigfloat()));
  Real f = frac_part(x);
  Real g = Real(1) - f;
  return compare(f, g) <= 0 ? f : g;
}

CfExpansion cf_expansion(const Real& x, int n) {
  if (n < 1) throw DomainError("cf_expansion needs n >= 1");
  CfExpansion out;
  Integer p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
  auto push = [&](const Integer& a) {
    Integer p = a * p_prev + p_prev2;
    Integer q = a * q_prev + q_prev2;
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
    out.partial_quotients.push_back(a);
    out.convergents.emplace_back(p, q);
  };

  if (x.kind() == Real::Kind::bigfloat) {
    BigFloat r = x.as_bigfloat();
    for (int k = 0; k <= n; ++k) {
      Integer a = floor_to_integer(r);
      push(a);
      BigFloat rem = r - BigFloat(a);
      if (rem.is_zero()) {
        out.terminated = true;
        break;
      }
      r = BigFloat(1L) / rem;
    }
    return out;
  }

  Real r = x;
  for (int k = 0; k <= n; ++k) {
    Integer a = floor(r);
    push(a);
    Real rem = r - Real(a);
    if (rem.is_zero()) {
      out.terminated = true;
      break;
    }
    r = Real(1) / rem;
  }
  return out;
}

namespace {

class Parser {
public:
  Parser(std::string_view text, std::string* warning) : s_(text), warning_(warning) {}

  Real parse() {
    Real v = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

private:
  [[noreturn]] void fail(const std::string& why) {
    throw DomainError("cannot parse real '" + std::string(s_) + "': " + why);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool eat_word(std::string_view w) {
    skip_ws();
    if (s_.substr(pos_, w.size()) == w) {
      pos_ += w.size();
      return true;
    }
    return false;
  }

  Real expr() {
    Real v = term();
    for (;;) {
      if (eat('+')) {
        v = v + term();
      } else if (eat('-')) {
        v = v - term();
      } else {
        return v;
      }
    }
  }

  Real term() {
    Real v = unary();
    for (;;) {
      if (eat('*')) {
        v = v * unary();
      } else if (eat('/')) {
        Real d = unary();
        if (d.is_zero()) fail("division by zero");
        v = v / d;
      } else {
        return v;
      }
    }
  }

  Real unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return primary();
  }

  unsigned long radicand() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("sqrt needs a positive integer");
    unsigned long d = std::stoul(std::string(s_.substr(start, pos_ - start)));
    if (d == 0) fail("sqrt(0)");
    return d;
  }

  Real primary() {
    if (eat('(')) {
      Real v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (eat_word("sqrt")) {
      unsigned long d;
      if (eat('(')) {
        d = radicand();
        if (!eat(')')) fail("missing ')'");
      } else {
        d = radicand();
      }
      return Real::sqrt_of(d);
    }
    if (eat_word("phi")) return Real::golden_ratio();
    return number();
  }

  Real number() {
    skip_ws();
    std::size_t start = pos_;
    std::string digits;
    long frac_digits = 0;
    bool dot = false;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits += c;
        if (dot) ++frac_digits;
      } else if (c == '.' && !dot) {
        dot = true;
      } else {
        break;
      }
      ++pos_;
    }
    if (digits.empty()) fail("expected a number");
    long exponent = 0;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      bool neg = false;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) neg = s_[pos_++] == '-';
      std::size_t es = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (es == pos_) {
        pos_ = save;
      } else {
        exponent = std::stol(std::string(s_.substr(es, pos_ - es)));
        if (neg) exponent = -exponent;
      }
    }
    std::size_t lead = digits.find_first_not_of('0');
    std::size_t significant = lead == std::string::npos ? 0 : digits.size() - lead;
    if (significant > 15) {
      if (warning_) {
        *warning_ = "decimal '" + std::string(s_.substr(start, pos_ - start)) +
                    "' has more than 15 significant digits; read as a big-float at " +
                    std::to_string(precision_bits()) + " bits";
      }
      return Real(BigFloat::from_string(s_.substr(start, pos_ - start)));
    }
    Rational r{Integer(digits, 10)};
    long shift = exponent - frac_digits;
    Integer ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    if (shift >= 0) {
      r *= Rational(ten_pow);
    } else {
      r /= Rational(ten_pow);
    }
    r.canonicalize();
    return Real(r);
  }

  std::string_view s_;
  std::string* warning_;
  std::size_t pos_ = 0;
};

}  // namespace

Real parse_real(std::string_view text, std::string* warning) {
  if (warning) warning->clear();
  return Parser(text, warning).parse();
}

}  // namespace mdlab
