#include "mdlab/kernels.hpp"

#include "mdlab/errors.hpp"
#include "mdlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace mdlab::kernels {

namespace {

std::atomic<int> g_threads{0};

constexpr long kChunk = 1L << 16;
// Below this a factor <n x> in double-double is not trusted to 1e-12 relative.
constexpr double kTinyFactor = 1e-11;

// n * x reduced mod 1 into [-1/2, 1/2], as double-double.
inline DD frac_signed(const DD& x, long n) {
  double nd = static_cast<double>(n);
  double p = nd * x.hi;
  double e = std::fma(nd, x.hi, -p);
  double r = p - std::nearbyint(p);  // exact: |p| < 2^52
  DD s = two_sum(r, e);
  s = quick_two_sum(s.hi, s.lo + nd * x.lo);
  double k = std::nearbyint(s.hi);
  if (k != 0) s = quick_two_sum(s.hi - k, s.lo);
  return s;
}

void chunk_candidates(const DD& a, const DD& b, long lo, long hi, double slack, std::vector<long>& out) {
  double best = INFINITY;
  for (long n = lo; n <= hi; ++n) {
    DD fa = frac_signed(a, n), fb = frac_signed(b, n);
    double da = std::fabs(fa.hi), db = std::fabs(fb.hi);
    if (da < kTinyFactor || db < kTinyFactor) {
      out.push_back(n);
      continue;
    }
    double ln = std::log(static_cast<double>(n));
    double v = static_cast<double>(n) * ln * ln * da * db;
    if (v <= best * (1 + slack)) {
      out.push_back(n);
      best = std::min(best, v);
    }
  }
}

struct RowCtx {
  DD a, b, delta;
  Real ea, eb, edelta;
  long Q;
};

// |r| <= delta for r = (p2 a + q b) - p1, with an exact fallback near the boundary.
bool within(const RowCtx& c, const DD& r, long p2, long q, long p1) {
  DD ar = r.hi < 0 ? DD{-r.hi, -r.lo} : r;
  DD diff = add(ar, DD{-c.delta.hi, -c.delta.lo});
  double g = diff.hi + diff.lo;
  double guard = 1e-24 * (1.0 + static_cast<double>(std::labs(p2) + std::labs(q)));
  if (g < -guard) return true;
  if (g > guard) return false;
  Real v = c.ea * Real(p2) + c.eb * Real(q) - Real(p1);
  return abs(v) <= c.edelta;
}

void bohr_row(const RowCtx& c, long p2, std::vector<Triple>& out) {
  DD pa = mul(c.a, p2);
  double d = c.delta.hi;
  for (long q = -c.Q; q <= c.Q; ++q) {
    DD center = add(pa, mul(c.b, q));
    long lo = static_cast<long>(std::floor(center.hi - d - 1e-9));
    long hi = static_cast<long>(std::ceil(center.hi + d + 1e-9));
    for (long p1 = lo; p1 <= hi; ++p1) {
      DD r = add(center, DD{-static_cast<double>(p1), 0.0});
      if (within(c, r, p2, q, p1)) out.push_back({p2, q, p1});
    }
  }
}

RowCtx make_ctx(const Real& a, const Real& b, long Q, const Real& delta) {
  if (delta.sign() <= 0) throw DomainError("Bohr set needs delta > 0");
  if (Q < 0) throw DomainError("Bohr set needs Q >= 0");
  return {to_dd(a), to_dd(b), to_dd(delta), a, b, delta, Q};
}

}  // namespace

DD to_dd(const BigFloat& x) {
  double hi = x.to_double();
  double lo = (x - BigFloat(hi)).to_double();
  return {hi, lo};
}

DD to_dd(const Real& x) { return to_dd(x.to_bigfloat()); }

double frac_dist_dd(const DD& x, long n) {
  DD f = frac_signed(x, n);
  return std::fabs(f.hi + f.lo);
}

double frac_dist_dd2(const DD& a, long x, const DD& b, long y) {
  DD fa = frac_signed(a, x), fb = frac_signed(b, y);
  DD s = add(fa, fb);
  double k = std::nearbyint(s.hi);
  if (k != 0) s = quick_two_sum(s.hi - k, s.lo);
  return std::fabs(s.hi + s.lo);
}

int threads() { return g_threads.load(); }
void set_threads(int n) { g_threads.store(std::max(0, n)); }

std::vector<long> gallagher_candidates_serial(const DD& a, const DD& b, long n0, long n1, double slack) {
  std::vector<long> out;
  for (long lo = n0; lo <= n1; lo += kChunk) chunk_candidates(a, b, lo, std::min(n1, lo + kChunk - 1), slack, out);
  return out;
}

std::vector<long> gallagher_candidates_omp(const DD& a, const DD& b, long n0, long n1, double slack) {
  if (n1 < n0) return {};
  long chunks = (n1 - n0) / kChunk + 1;
  std::vector<std::vector<long>> parts(static_cast<std::size_t>(chunks));
  parallel_for(chunks, [&](long i) {
    long lo = n0 + i * kChunk;
    chunk_candidates(a, b, lo, std::min(n1, lo + kChunk - 1), slack, parts[static_cast<std::size_t>(i)]);
  });
  std::vector<long> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<Triple> bohr_members_serial(const Real& a, const Real& b, long Q, const Real& delta) {
  RowCtx c = make_ctx(a, b, Q, delta);
  std::vector<Triple> out;
  for (long p2 = -Q; p2 <= Q; ++p2) bohr_row(c, p2, out);
  return out;
}

std::vector<Triple> bohr_members_omp(const Real& a, const Real& b, long Q, const Real& delta) {
  RowCtx c = make_ctx(a, b, Q, delta);
  std::vector<std::vector<Triple>> rows(static_cast<std::size_t>(2 * Q + 1));
  parallel_for(2 * Q + 1, [&](long i) { bohr_row(c, i - Q, rows[static_cast<std::size_t>(i)]); });
  std::vector<Triple> out;
  for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::vector<ShortVecResult> shortest_batch_serial(const std::vector<Lattice3>& lattices) {
  std::vector<ShortVecResult> out;
  out.reserve(lattices.size());
  for (const auto& L : lattices) out.push_back(sup_shortest_vector(L));
  return out;
}

std::vector<ShortVecResult> shortest_batch_omp(const std::vector<Lattice3>& lattices) {
  std::vector<ShortVecResult> out(lattices.size());
  parallel_for(static_cast<long>(lattices.size()),
               [&](long i) { out[static_cast<std::size_t>(i)] = sup_shortest_vector(lattices[static_cast<std::size_t>(i)]); });
  return out;
}

}  // namespace mdlab::kernels
