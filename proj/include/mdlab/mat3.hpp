#pragma once

#include <array>
#include <cstddef>

namespace mdlab {

template <class T>
using Vec3 = std::array<T, 3>;

template <class T>
struct Mat3 {
  std::array<std::array<T, 3>, 3> m;

  T& operator()(std::size_t i, std::size_t j) { return m[i][j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return m[i][j]; }

  static Mat3 identity() {
    Mat3 r = zero();
    for (std::size_t i = 0; i < 3; ++i) r.m[i][i] = T(1);
    return r;
  }
  static Mat3 zero() {
    Mat3 r{};
    for (auto& row : r.m)
      for (auto& e : row) e = T(0);
    return r;
  }
  static Mat3 diag(const T& a, const T& b, const T& c) {
    Mat3 r = zero();
    r.m[0][0] = a;
    r.m[1][1] = b;
    r.m[2][2] = c;
    return r;
  }

  Vec3<T> col(std::size_t j) const { return {m[0][j], m[1][j], m[2][j]}; }
  void set_col(std::size_t j, const Vec3<T>& v) {
    for (std::size_t i = 0; i < 3; ++i) m[i][j] = v[i];
  }

  Mat3 transpose() const {
    Mat3 r = *this;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }

  T det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }

  // adj(M) with M * adj(M) = det(M) * I.
  Mat3 adjugate() const {
    Mat3 r = *this;
    r.m[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    r.m[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
    r.m[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
    r.m[1][0] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    r.m[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
    r.m[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
    r.m[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    r.m[2][1] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
    r.m[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return r;
  }

  friend Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r = zero();
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        T acc = a.m[i][0] * b.m[0][j];
        acc = acc + a.m[i][1] * b.m[1][j];
        acc = acc + a.m[i][2] * b.m[2][j];
        r.m[i][j] = acc;
      }
    return r;
  }

  friend Vec3<T> operator*(const Mat3& a, const Vec3<T>& v) {
    Vec3<T> r;
    for (std::size_t i = 0; i < 3; ++i) {
      T acc = a.m[i][0] * v[0];
      acc = acc + a.m[i][1] * v[1];
      acc = acc + a.m[i][2] * v[2];
      r[i] = acc;
    }
    return r;
  }

  friend bool operator==(const Mat3& a, const Mat3& b) {
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        if (!(a.m[i][j] == b.m[i][j])) return false;
    return true;
  }
};

template <class U, class T>
Mat3<U> mat_cast(const Mat3<T>& a) {
  Mat3<U> r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r.m[i][j] = U(a.m[i][j]);
  return r;
}

}  // namespace mdlab
