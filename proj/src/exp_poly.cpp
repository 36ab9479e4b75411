#include "mdlab/exp_poly.hpp"

#include "mdlab/errors.hpp"

namespace mdlab {

ExpPoly::ExpPoly(const Real& c, ExpArg e) {
  if (!c.is_zero()) terms_.emplace(e, c);
}

Real ExpPoly::coeff(ExpArg arg) const {
  auto it = terms_.find(arg);
  return it == terms_.end() ? Real(0) : it->second;
}

ExpPoly ExpPoly::operator-() const {
  ExpPoly r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

ExpPoly operator+(const ExpPoly& a, const ExpPoly& b) {
  ExpPoly r = a;
  for (const auto& [e, c] : b.terms_) {
    auto it = r.terms_.find(e);
    if (it == r.terms_.end()) {
      r.terms_.emplace(e, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) r.terms_.erase(it);
    }
  }
  return r;
}

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
  ExpPoly r;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) r = r + ExpPoly(ca * cb, ea + eb);
  return r;
}

bool operator==(const ExpPoly& a, const ExpPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  for (; ia != a.terms_.end(); ++ia, ++ib) {
    if (!(ia->first == ib->first) || ia->second != ib->second) return false;
  }
  return true;
}

ExpPoly ExpPoly::monomial_inverse() const {
  if (!is_monomial()) throw DomainError("inverse of a non-monomial ExpPoly");
  const auto& [e, c] = *terms_.begin();
  return ExpPoly(Real(1) / c, -e);
}

BigFloat ExpPoly::eval(const Real& t, const Real& s) const {
  BigFloat total(0L);
  if (terms_.empty()) return total;
  BigFloat bt = t.to_bigfloat(), bs = s.to_bigfloat();
  for (const auto& [e, c] : terms_) {
    BigFloat arg = ldexp(bt * BigFloat(static_cast<long>(e.kt)) + bs * BigFloat(static_cast<long>(e.ks)), -1);
    total += c.to_bigfloat() * exp(arg);
  }
  return total;
}

std::string ExpPoly::repr() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.repr() + ")";
    if (e.kt != 0 || e.ks != 0) out += "*e^(" + std::to_string(e.kt) + "t/2" + (e.ks < 0 ? "" : "+") + std::to_string(e.ks) + "s/2)";
  }
  return out;
}

ExpMatrix inverse(const ExpMatrix& m) {
  ExpPoly det = m.det();
  if (!det.is_monomial()) throw DomainError("ExpMatrix determinant is not a single term: " + det.repr());
  ExpPoly inv_det = det.monomial_inverse();
  ExpMatrix adj = m.adjugate();
  for (auto& row : adj.m)
    for (auto& e : row) e = e * inv_det;
  return adj;
}

Mat3<BigFloat> eval(const ExpMatrix& m, const Real& t, const Real& s) {
  Mat3<BigFloat> r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r(i, j) = m(i, j).eval(t, s);
  return r;
}

std::string repr(const ExpMatrix& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < 3; ++i) {
    out += i ? "; " : "";
    for (std::size_t j = 0; j < 3; ++j) out += (j ? ", " : "") + m(i, j).repr();
  }
  return out + "]";
}

BigFloat exp_poly_eval(const ExpPoly& e, const Real& t, const Real& s) { return e.eval(t, s); }

}  // namespace mdlab
