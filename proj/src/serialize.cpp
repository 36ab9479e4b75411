#include "mdlab/serialize.hpp"

#include "mdlab/errors.hpp"

#include <cmath>

namespace mdlab {

namespace {

Json rational_json(const Rational& q) {
  return {{"kind", "rational"}, {"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

Rational rational_from(const Json& j) {
  Rational q(Integer(j.at("num").get<std::string>()), Integer(j.at("den").get<std::string>()));
  q.canonicalize();
  return q;
}

}  // namespace

Json to_json(const BigFloat& x) {
  int digits = static_cast<int>(std::ceil(static_cast<double>(x.precision()) * 0.30103)) + 3;
  return {{"kind", "bigfloat"}, {"value", x.to_string(digits)}, {"bits", static_cast<long>(x.precision())}};
}

BigFloat bigfloat_from_json(const Json& j) {
  ScopedPrecision scope(static_cast<unsigned>(j.value("bits", static_cast<long>(precision_bits()))));
  return BigFloat::from_string(j.at("value").get<std::string>());
}

Json to_json(const Real& x) {
  switch (x.kind()) {
    case Real::Kind::rational:
      return rational_json(x.as_rational());
    case Real::Kind::surd: {
      const Surd& s = x.as_surd();
      Json out{{"kind", "surd"}, {"p", rational_json(s.p)}, {"q", rational_json(s.q)}, {"d", s.d}};
      return out;
    }
    case Real::Kind::bigfloat:
      break;
  }
  return to_json(x.as_bigfloat());
}

Real real_from_json(const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "rational") return Real(rational_from(j));
  if (kind == "surd")
    return Real::surd(rational_from(j.at("p")), rational_from(j.at("q")), j.at("d").get<unsigned long>());
  if (kind == "bigfloat") return Real(bigfloat_from_json(j));
  throw DomainError("unknown Real kind: " + kind);
}

Json to_json(const Integer& x) { return x.get_str(); }

Json to_json(const IVec3& v) { return Json::array({v[0].get_str(), v[1].get_str(), v[2].get_str()}); }

Json to_json(const Mat3<Integer>& m) {
  Json rows = Json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(Json::array({m(i, 0).get_str(), m(i, 1).get_str(), m(i, 2).get_str()}));
  return rows;
}

Json to_json(const Mat3<BigFloat>& m) {
  Json rows = Json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(Json::array({to_json(m(i, 0)), to_json(m(i, 1)), to_json(m(i, 2))}));
  return rows;
}

Json to_json(const Lattice3& L) { return {{"basis", to_json(L.basis)}, {"provenance", L.provenance}}; }

Lattice3 lattice_from_json(const Json& j) {
  Lattice3 L{Mat3<BigFloat>::zero(), j.value("provenance", std::string())};
  const Json& rows = j.at("basis");
  if (rows.size() != 3) throw DomainError("basis must have 3 rows");
  for (int i = 0; i < 3; ++i) {
    if (rows[i].size() != 3) throw DomainError("basis rows must have 3 entries");
    for (int k = 0; k < 3; ++k) L.basis(i, k) = real_from_json(rows[i][k]).to_bigfloat();
  }
  return L;
}

Json to_json(const BohrParams& p) {
  return {{"a", to_json(p.a)}, {"b", to_json(p.b)}, {"Q", p.Q}, {"delta", to_json(p.delta)}};
}

Json to_json(const BohrSet& B, bool with_members) {
  Json out{{"params", to_json(B.params)}, {"size", B.members.size()}};
  if (with_members) out["members"] = B.members;
  return out;
}

Json to_json(const GapCover& P) {
  Json v = Json::array(), minima = Json::array();
  for (const auto& x : P.v) v.push_back(to_json(x));
  for (const auto& m : P.minima) minima.push_back(to_json(m));
  return {{"v", v}, {"N", P.N}, {"lambda", to_json(P.lambda)}, {"minima", minima}, {"C", P.C}, {"size", P.size().get_str()}};
}

}  // namespace mdlab
