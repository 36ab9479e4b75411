#pragma once

#include "mdlab/bigfloat.hpp"
#include "mdlab/mat3.hpp"
#include "mdlab/real.hpp"

#include <array>
#include <string>
#include <vector>

namespace mdlab {

inline constexpr double kDefaultBudgetCells = 1e8;

// Cell budget for coefficient-box enumeration (process wide).
double budget_cells();
void set_budget_cells(double cells);

using IVec3 = Vec3<Integer>;
using BVec3 = Vec3<BigFloat>;

struct Lattice3 {
  Mat3<BigFloat> basis;  // columns generate the lattice
  std::string provenance;

  static Lattice3 standard();
  BVec3 point(const IVec3& coeffs) const;
};

struct ShortVecResult {
  IVec3 coeffs;
  BVec3 vector;
  BigFloat norm;  // sup-norm of vector
};

struct LllResult {
  Lattice3 reduced;       // reduced.basis = basis * transform
  Mat3<Integer> transform;
};

BigFloat sup_norm(const BVec3& v);
Integer l1_norm(const IVec3& c);
// Flips sign so the first nonzero coordinate is positive.
IVec3 normalize_sign(IVec3 c);

LllResult lll_reduce(const Lattice3& lattice, double delta = 0.99);

// Global minimizer of the sup-norm over nonzero lattice points. Among exact ties the
// coefficient vector with the smallest l1 norm wins, then the lexicographically
// largest sign-normalized vector, so the standard lattice returns (1,0,0).
ShortVecResult sup_shortest_vector(const Lattice3& lattice);

// All nonzero points with sup-norm <= radius, one per +/- pair, sign-normalized.
std::vector<ShortVecResult> sup_ball_points(const Lattice3& lattice, const BigFloat& radius);

BigFloat delta_of(const Lattice3& lattice);
bool in_K_eps(const Lattice3& lattice, const Real& eps);

// N(x) = max(|x1|/Q, |x2|/Q, |x1 a + x2 b - x3| / delta).
struct BodyNorm {
  Real a;
  Real b;
  Real Q;
  Real delta;

  BigFloat operator()(const IVec3& x) const;
  // Lattice whose sup-norm on coefficient x equals N(x).
  Lattice3 image_lattice() const;
};

struct SuccessiveMinima {
  std::array<BigFloat, 3> lambda;
  std::array<IVec3, 3> v;
};

// Greedy minima with the spanning constraint: v1, v2 extend to a basis and det(v1|v2|v3) = +-1.
SuccessiveMinima successive_minima(const BodyNorm& body);

struct SiegelResult {
  Mat3<BigFloat> k;          // orthogonal, det +1
  std::array<BigFloat, 3> a;  // diagonal part
  Mat3<BigFloat> n;          // upper unipotent
  Mat3<Integer> gamma;       // det +1
};

inline constexpr double kSiegelTheta1 = 2.0;  // a_i <= theta1 * a_{i+1}
inline constexpr double kSiegelTheta2 = 0.5;  // |n_ij| <= theta2 (+ tolerance)

// g = k * diag(a) * n * gamma.
SiegelResult siegel_reduce(const Mat3<BigFloat>& g);

Mat3<BigFloat> to_bigfloat(const Mat3<Integer>& m);
Mat3<BigFloat> to_bigfloat(const Mat3<Real>& m);
Integer det(const Mat3<Integer>& m);
Mat3<Integer> inverse_unimodular(const Mat3<Integer>& m);

}  // namespace mdlab
