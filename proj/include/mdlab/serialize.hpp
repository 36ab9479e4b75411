#pragma once

#include "mdlab/bohr.hpp"
#include "mdlab/lattice3.hpp"
#include "mdlab/real.hpp"

#include "json.hpp"

namespace mdlab {

using Json = nlohmann::json;

// {"kind": "rational", "num": "...", "den": "..."}
// {"kind": "surd", "p": {...}, "q": {...}, "d": n}
// {"kind": "bigfloat", "value": "...", "bits": n}
Json to_json(const Real& x);
Real real_from_json(const Json& j);

// Enough digits to read back the same value at its own precision.
Json to_json(const BigFloat& x);
BigFloat bigfloat_from_json(const Json& j);

Json to_json(const Integer& x);
Json to_json(const IVec3& v);
Json to_json(const Mat3<Integer>& m);
Json to_json(const Mat3<BigFloat>& m);

// {"basis": [[...]], "provenance": "..."}, rows of the basis matrix.
Json to_json(const Lattice3& L);
Lattice3 lattice_from_json(const Json& j);

Json to_json(const BohrParams& p);
Json to_json(const BohrSet& B, bool with_members = true);
Json to_json(const GapCover& P);

}  // namespace mdlab
