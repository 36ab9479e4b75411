#include "mdlab/lattice3.hpp"

#include "mdlab/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>

namespace mdlab {

namespace {

std::atomic<double> g_budget_cells{kDefaultBudgetCells};

constexpr double kRelSlack = 1e-9;

BigFloat dot(const BVec3& x, const BVec3& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; }

struct GramSchmidt {
  std::array<BVec3, 3> bstar;
  std::array<BigFloat, 3> norm2;
  BigFloat mu[3][3];
};

GramSchmidt gram_schmidt(const std::array<BVec3, 3>& b) {
  GramSchmidt gs;
  for (int i = 0; i < 3; ++i) {
    gs.bstar[i] = b[i];
    for (int j = 0; j < i; ++j) {
      gs.mu[i][j] = dot(b[i], gs.bstar[j]) / gs.norm2[j];
      for (int c = 0; c < 3; ++c) gs.bstar[i][c] -= gs.mu[i][j] * gs.bstar[j][c];
    }
    gs.norm2[i] = dot(gs.bstar[i], gs.bstar[i]);
  }
  return gs;
}

// Double-precision copy of a reduced basis and its R factor (columns b_j = sum_i R_ij q_i).
struct Numeric {
  double B[3][3];
  double R[3][3];
};

Numeric numeric_of(const Mat3<BigFloat>& basis) {
  Numeric n{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) n.B[i][j] = basis(i, j).to_double();
  double q[3][3];
  for (int j = 0; j < 3; ++j) {
    double v[3] = {n.B[0][j], n.B[1][j], n.B[2][j]};
    for (int i = 0; i < j; ++i) {
      double r = q[0][i] * v[0] + q[1][i] * v[1] + q[2][i] * v[2];
      n.R[i][j] = r;
      for (int c = 0; c < 3; ++c) v[c] -= r * q[c][i];
    }
    double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (!(len > 0) || !std::isfinite(len)) throw DomainError("singular lattice basis");
    n.R[j][j] = len;
    for (int c = 0; c < 3; ++c) q[c][j] = v[c] / len;
    for (int i = j + 1; i < 3; ++i) n.R[i][j] = 0;
  }
  return n;
}

void check_budget(const Numeric& n, double r2) {
  double r = std::sqrt(r2);
  double cells = 1;
  for (int i = 0; i < 3; ++i) cells *= 2 * std::floor(r / n.R[i][i]) + 1;
  if (!(cells <= budget_cells())) {
    throw BudgetError("enumeration box of " + std::to_string(cells) + " cells exceeds the budget of " +
                      std::to_string(budget_cells()));
  }
}

// Visits every c with ||B c||_2^2 <= r2 (r2 may shrink during the walk). c = 0 is skipped.
void enumerate_ball(const Numeric& n, double& r2, const std::function<void(const long*, double sup)>& visit) {
  const double (*R)[3] = n.R;
  long c[3];
  double bound2 = std::sqrt(r2) / R[2][2];
  for (c[2] = -static_cast<long>(std::floor(bound2)); c[2] <= static_cast<long>(std::floor(bound2)); ++c[2]) {
    double y2 = R[2][2] * c[2];
    double rem2 = r2 - y2 * y2;
    if (rem2 < 0) continue;
    double center1 = -R[1][2] * c[2] / R[1][1];
    double hw1 = std::sqrt(rem2) / R[1][1];
    for (c[1] = static_cast<long>(std::ceil(center1 - hw1)); c[1] <= static_cast<long>(std::floor(center1 + hw1)); ++c[1]) {
      double y1 = R[1][1] * c[1] + R[1][2] * c[2];
      double rem1 = r2 - y2 * y2 - y1 * y1;
      if (rem1 < 0) continue;
      double center0 = -(R[0][1] * c[1] + R[0][2] * c[2]) / R[0][0];
      double hw0 = std::sqrt(rem1) / R[0][0];
      for (c[0] = static_cast<long>(std::ceil(center0 - hw0)); c[0] <= static_cast<long>(std::floor(center0 + hw0)); ++c[0]) {
        if (c[0] == 0 && c[1] == 0 && c[2] == 0) continue;
        double sup = 0;
        for (int i = 0; i < 3; ++i) {
          double v = n.B[i][0] * c[0] + n.B[i][1] * c[1] + n.B[i][2] * c[2];
          sup = std::max(sup, std::fabs(v));
        }
        visit(c, sup);
      }
    }
  }
}

IVec3 apply(const Mat3<Integer>& U, const long* c) {
  IVec3 a;
  for (int i = 0; i < 3; ++i) a[i] = U(i, 0) * c[0] + U(i, 1) * c[1] + U(i, 2) * c[2];
  return a;
}

// Tie order: smaller l1 first, then lexicographically larger normalized vector.
bool tie_before(const IVec3& x, const IVec3& y) {
  Integer lx = l1_norm(x), ly = l1_norm(y);
  if (lx != ly) return lx < ly;
  return y < x;
}

ShortVecResult make_result(const Lattice3& lattice, const IVec3& coeffs) {
  ShortVecResult r;
  r.coeffs = normalize_sign(coeffs);
  r.vector = lattice.point(r.coeffs);
  r.norm = sup_norm(r.vector);
  return r;
}

}  // namespace

double budget_cells() { return g_budget_cells.load(); }
void set_budget_cells(double cells) {
  if (!(cells >= 1)) throw DomainError("budget must be at least one cell");
  g_budget_cells.store(cells);
}

Lattice3 Lattice3::standard() { return {Mat3<BigFloat>::identity(), "Z^3"}; }

BVec3 Lattice3::point(const IVec3& c) const {
  BVec3 v;
  for (int i = 0; i < 3; ++i) {
    v[i] = basis(i, 0) * c[0];
    v[i] += basis(i, 1) * c[1];
    v[i] += basis(i, 2) * c[2];
  }
  return v;
}

BigFloat sup_norm(const BVec3& v) { return max(max(abs(v[0]), abs(v[1])), abs(v[2])); }

Integer l1_norm(const IVec3& c) { return abs(c[0]) + abs(c[1]) + abs(c[2]); }

IVec3 normalize_sign(IVec3 c) {
  for (int i = 0; i < 3; ++i) {
    if (c[i] != 0) {
      if (c[i] < 0)
        for (auto& x : c) x = -x;
      break;
    }
  }
  return c;
}

Mat3<BigFloat> to_bigfloat(const Mat3<Integer>& m) {
  Mat3<BigFloat> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = BigFloat(m(i, j));
  return r;
}

Mat3<BigFloat> to_bigfloat(const Mat3<Real>& m) {
  Mat3<BigFloat> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = m(i, j).to_bigfloat();
  return r;
}

Integer det(const Mat3<Integer>& m) { return m.det(); }

Mat3<Integer> inverse_unimodular(const Mat3<Integer>& m) {
  Integer d = m.det();
  if (d != 1 && d != -1) throw DomainError("matrix is not unimodular");
  Mat3<Integer> adj = m.adjugate();
  if (d == -1)
    for (auto& row : adj.m)
      for (auto& e : row) e = -e;
  return adj;
}

LllResult lll_reduce(const Lattice3& lattice, double delta) {
  std::array<BVec3, 3> b;
  for (int j = 0; j < 3; ++j) b[j] = lattice.basis.col(j);
  Mat3<Integer> U = Mat3<Integer>::identity();
  BigFloat det = lattice.basis.det();
  if (det.is_zero() || !det.is_finite()) throw DomainError("singular lattice basis");

  const BigFloat bdelta(delta);
  int k = 1;
  long guard = 0;
  GramSchmidt gs = gram_schmidt(b);
  while (k < 3) {
    if (++guard > 1000000) throw BudgetError("LLL did not converge");
    for (int j = k - 1; j >= 0; --j) {
      Integer q = round_to_integer(gs.mu[k][j]);
      if (q == 0) continue;
      for (int c = 0; c < 3; ++c) {
        b[k][c] -= b[j][c] * q;
        U(c, k) -= q * U(c, j);
      }
      gs = gram_schmidt(b);
    }
    BigFloat m = gs.mu[k][k - 1];
    if (gs.norm2[k] >= (bdelta - m * m) * gs.norm2[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      for (int c = 0; c < 3; ++c) std::swap(U(c, k), U(c, k - 1));
      gs = gram_schmidt(b);
      k = std::max(k - 1, 1);
    }
  }
  LllResult out;
  out.transform = U;
  out.reduced.provenance = lattice.provenance.empty() ? "LLL" : lattice.provenance + " | LLL";
  for (int j = 0; j < 3; ++j) out.reduced.basis.set_col(j, b[j]);
  return out;
}

ShortVecResult sup_shortest_vector(const Lattice3& lattice) {
  LllResult red = lll_reduce(lattice);
  Numeric n = numeric_of(red.reduced.basis);

  double best = 0;
  for (int j = 0; j < 3; ++j) {
    double s = 0;
    for (int i = 0; i < 3; ++i) s = std::max(s, std::fabs(n.B[i][j]));
    best = j == 0 ? s : std::min(best, s);
  }
  double r2 = 3 * best * best * (1 + kRelSlack);
  check_budget(n, r2);

  std::vector<std::array<long, 3>> cands;
  enumerate_ball(n, r2, [&](const long* c, double sup) {
    if (sup <= best * (1 + kRelSlack)) {
      if (sup < best) {
        best = sup;
        r2 = 3 * best * best * (1 + kRelSlack);
        cands.erase(std::remove_if(cands.begin(), cands.end(),
                                   [&](const std::array<long, 3>& x) {
                                     double s = 0;
                                     for (int i = 0; i < 3; ++i)
                                       s = std::max(s, std::fabs(n.B[i][0] * x[0] + n.B[i][1] * x[1] + n.B[i][2] * x[2]));
                                     return s > best * (1 + kRelSlack);
                                   }),
                    cands.end());
      }
      cands.push_back({c[0], c[1], c[2]});
    }
  });

  bool have = false;
  ShortVecResult best_r;
  for (const auto& c : cands) {
    ShortVecResult r = make_result(lattice, apply(red.transform, c.data()));
    if (!have) {
      best_r = r;
      have = true;
      continue;
    }
    int cmp = compare(r.norm, best_r.norm);
    if (cmp < 0 || (cmp == 0 && tie_before(r.coeffs, best_r.coeffs))) best_r = r;
  }
  if (!have) throw DomainError("enumeration found no nonzero vector");
  return best_r;
}

std::vector<ShortVecResult> sup_ball_points(const Lattice3& lattice, const BigFloat& radius) {
  LllResult red = lll_reduce(lattice);
  Numeric n = numeric_of(red.reduced.basis);
  double rad = radius.to_double();
  double r2 = 3 * rad * rad * (1 + kRelSlack);
  check_budget(n, r2);
  std::vector<ShortVecResult> out;
  enumerate_ball(n, r2, [&](const long* c, double sup) {
    if (sup > rad * (1 + kRelSlack)) return;
    // keep one representative per +/- pair
    for (int i = 2; i >= 0; --i) {
      if (c[i] != 0) {
        if (c[i] < 0) return;
        break;
      }
    }
    ShortVecResult r = make_result(lattice, apply(red.transform, c));
    if (r.norm <= radius) out.push_back(std::move(r));
  });
  std::sort(out.begin(), out.end(), [](const ShortVecResult& x, const ShortVecResult& y) {
    int cmp = compare(x.norm, y.norm);
    if (cmp != 0) return cmp < 0;
    return tie_before(x.coeffs, y.coeffs);
  });
  return out;
}

BigFloat delta_of(const Lattice3& lattice) { return -log(sup_shortest_vector(lattice).norm); }

bool in_K_eps(const Lattice3& lattice, const Real& eps) {
  if (eps.sign() <= 0) throw DomainError("eps must be positive");
  ShortVecResult r = sup_shortest_vector(lattice);
  if (eps.kind() == Real::Kind::rational) return mpfr_cmp_q(r.norm.get(), eps.as_rational().get_mpq_t()) > 0;
  return r.norm > eps.to_bigfloat();
}

BigFloat BodyNorm::operator()(const IVec3& x) const {
  BigFloat q = Q.to_bigfloat();
  BigFloat lin = a.to_bigfloat() * BigFloat(x[0]) + b.to_bigfloat() * BigFloat(x[1]) - BigFloat(x[2]);
  BigFloat r = max(abs(BigFloat(x[0])) / q, abs(BigFloat(x[1])) / q);
  return max(r, abs(lin) / delta.to_bigfloat());
}

Lattice3 BodyNorm::image_lattice() const {
  if (Q.sign() <= 0 || delta.sign() <= 0) throw DomainError("body norm needs Q > 0 and delta > 0");
  BigFloat iq = BigFloat(1L) / Q.to_bigfloat();
  BigFloat id = BigFloat(1L) / delta.to_bigfloat();
  Mat3<BigFloat> m = Mat3<BigFloat>::zero();
  m(0, 0) = iq;
  m(1, 1) = iq;
  m(2, 0) = a.to_bigfloat() * id;
  m(2, 1) = b.to_bigfloat() * id;
  m(2, 2) = -id;
  return {m, "body image"};
}

SuccessiveMinima successive_minima(const BodyNorm& body) {
  Lattice3 image = body.image_lattice();
  SuccessiveMinima out;
  ShortVecResult first = sup_shortest_vector(image);
  out.lambda[0] = body(first.coeffs);
  out.v[0] = first.coeffs;

  auto minor_gcd = [](const IVec3& x, const IVec3& y) {
    Integer g = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        Integer m = x[i] * y[j] - x[j] * y[i];
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), m.get_mpz_t());
      }
    return g;
  };

  for (int level = 1; level < 3; ++level) {
    BigFloat radius = out.lambda[level - 1];
    for (int attempt = 0;; ++attempt) {
      if (attempt > 200) throw BudgetError("successive minima search did not terminate");
      bool found = false;
      for (const ShortVecResult& r : sup_ball_points(image, radius)) {
        bool ok;
        if (level == 1) {
          ok = minor_gcd(out.v[0], r.coeffs) == 1;
        } else {
          Mat3<Integer> m;
          for (int i = 0; i < 3; ++i) {
            m(i, 0) = out.v[0][i];
            m(i, 1) = out.v[1][i];
            m(i, 2) = r.coeffs[i];
          }
          Integer d = m.det();
          ok = d == 1 || d == -1;
        }
        if (ok) {  // points arrive sorted by norm then tie order
          out.lambda[level] = body(r.coeffs);
          out.v[level] = r.coeffs;
          found = true;
          break;
        }
      }
      if (found) break;
      radius = radius * BigFloat(2L);
    }
  }
  return out;
}

SiegelResult siegel_reduce(const Mat3<BigFloat>& g) {
  BigFloat d = g.det();
  BigFloat tol = ldexp(BigFloat(1L), -static_cast<long>(precision_bits() / 2));
  if (abs(d - BigFloat(1L)) > tol) throw DomainError("siegel_reduce needs det g = 1");

  LllResult red = lll_reduce({g, "siegel"});
  Mat3<Integer> U = red.transform;
  Mat3<BigFloat> b = red.reduced.basis;
  if (U.det() < 0) {
    for (int i = 0; i < 3; ++i) {
      U(i, 2) = -U(i, 2);
      b(i, 2) = -b(i, 2);
    }
  }

  // QR of b = g U: b = k R with R upper triangular, positive diagonal.
  SiegelResult out;
  out.k = Mat3<BigFloat>::zero();
  Mat3<BigFloat> R = Mat3<BigFloat>::zero();
  for (int j = 0; j < 3; ++j) {
    BVec3 v = b.col(j);
    for (int i = 0; i < j; ++i) {
      BigFloat r = out.k(0, i) * b(0, j) + out.k(1, i) * b(1, j) + out.k(2, i) * b(2, j);
      R(i, j) = r;
      for (int c = 0; c < 3; ++c) v[c] -= r * out.k(c, i);
    }
    BigFloat len = sqrt(dot(v, v));
    R(j, j) = len;
    for (int c = 0; c < 3; ++c) out.k(c, j) = v[c] / len;
  }
  out.n = Mat3<BigFloat>::identity();
  for (int i = 0; i < 3; ++i) {
    out.a[i] = R(i, i);
    for (int j = i + 1; j < 3; ++j) out.n(i, j) = R(i, j) / R(i, i);
  }
  out.gamma = inverse_unimodular(U);
  return out;
}

}  // namespace mdlab
