#pragma once

#include "mdlab/bigfloat.hpp"
#include "mdlab/real.hpp"

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace mdlab {

struct MarginResult {
  BigFloat margin;
  long argmin_q = 0;
};

// min over 1 <= q <= Qmax of max_i q^{1/d + kappa} <q x_i>, d = vals.size().
// A positive margin that stays put as Qmax grows is evidence, not proof.
MarginResult diophantine_margin(const std::vector<Real>& vals, const Real& kappa, long Qmax);

enum class ExponentKind { simultaneous, dual, multiplicative };
std::string to_string(ExponentKind kind);

struct Witness {
  std::vector<Integer> datum;  // (x, y) for dual, (n) otherwise
  BigFloat w;                  // +inf for an exact relation
};

// Certified lower bound only; the true exponent is never claimed.
struct ExponentEstimate {
  ExponentKind kind = ExponentKind::dual;
  BigFloat lower_bound;
  std::vector<Witness> witnesses;  // successive improvements, last one attains lower_bound
  long search_bound = 0;
  bool infinite = false;  // exact relation found
};

// Best w = -log<xa + yb> / log(|x| + |y|) over 2 <= |x| + |y| <= Hmax.
ExponentEstimate omega_dual_lower(const Real& a, const Real& b, long Hmax);
// Best w = -log max(<na>, <nb>) / log n over 2 <= n <= Nmax.
ExponentEstimate omega_simul_lower(const Real& a, const Real& b, long Nmax);
// Best w = -(log<na> + log<nb>) / log n over 2 <= n <= Nmax.
ExponentEstimate omega_mult_lower(const Real& a, const Real& b, long Nmax);

// Recomputes the witness quality from scratch (used at doubled precision in tests).
BigFloat witness_quality(ExponentKind kind, const Real& a, const Real& b, const Witness& w);

struct BsResult {
  BigFloat value;
  long q_star = 0;
  long stop_q = 0;         // first q with 1/q^2 below the running max
  bool certified = false;  // false when hard_cap was reached first
};

// max_q min{1/q^2, e^{-s/2}/(q<q v1>), e^{-s/2}/(q<q v2>)}. Terms with <q v_i> = 0 are
// infinite and skipped.
BsResult b_s_value(const Real& v1, const Real& v2, const Real& s, long hard_cap = 1000000);

struct TraceRow {
  long n;
  BigFloat value;
};

struct GallagherResult {
  BigFloat min_value;
  long argmin = 0;
  std::vector<TraceRow> trace;  // every new running minimum
};

// Running minimum of n (log n)^2 <n alpha><n beta> over 2 <= n <= Nmax.
// Double-double prefilter over parallel chunks, big-float confirmation of every trace row.
GallagherResult gallagher_scan(const Real& alpha, const Real& beta, long Nmax);
// Plain big-float loop; the reference the fast scan is tested against.
GallagherResult gallagher_scan_reference(const Real& alpha, const Real& beta, long Nmax);

struct PsiSpec {
  enum class Kind { closed_form, table, constant };
  Kind kind = Kind::closed_form;
  Real c = Real(1);
  Real gamma = Real(0);
  std::map<long, Real> table;  // step function: value at the largest key <= n

  static PsiSpec closed(const Real& c, const Real& gamma);
  static PsiSpec constant(const Real& c);
  // DomainError unless the values are non-increasing.
  static PsiSpec from_table(std::map<long, Real> table);

  // c / (n (log n)^gamma) for n >= 2; constant c; or the table step.
  BigFloat operator()(long n) const;
  std::string describe() const;
};

struct PsiCount {
  long count = 0;
  std::vector<long> solutions;
};

// n in [2, Nmax] with <n alpha><n beta> < psi(n).
PsiCount psi_count(const Real& alpha, const Real& beta, const PsiSpec& psi, long Nmax);

// Header "n,value", 30 significant digits.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

}  // namespace mdlab
