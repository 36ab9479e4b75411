#pragma once

// Double-double arithmetic (about 106 bits) for prefilters. Every decision that
// lands within the error guard is re-made in big-float.

#include <cmath>

namespace mdlab::kernels {

struct DD {
  double hi = 0;
  double lo = 0;
};

inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DD quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline DD add(const DD& x, const DD& y) {
  DD s = two_sum(x.hi, y.hi);
  return quick_two_sum(s.hi, s.lo + x.lo + y.lo);
}

inline DD neg(const DD& x) { return {-x.hi, -x.lo}; }
inline DD sub(const DD& x, const DD& y) { return add(x, neg(y)); }

inline DD mul(const DD& x, long n) {
  double nd = static_cast<double>(n);
  double p = nd * x.hi;
  double e = std::fma(nd, x.hi, -p);
  return quick_two_sum(p, e + nd * x.lo);
}

inline DD mul(const DD& x, const DD& y) {
  double p = x.hi * y.hi;
  double e = std::fma(x.hi, y.hi, -p);
  return quick_two_sum(p, e + x.hi * y.lo + x.lo * y.hi);
}

inline bool less(const DD& x, const DD& y) { return x.hi < y.hi || (x.hi == y.hi && x.lo < y.lo); }
inline double value(const DD& x) { return x.hi + x.lo; }

}  // namespace mdlab::kernels
