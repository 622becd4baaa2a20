#pragma once

#include "attkit/vec3.hpp"

namespace attkit {

/// 3x3 matrix, row-major, value semantics.
struct Mat3 {
  double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

  constexpr Mat3() = default;

  static constexpr Mat3 identity() {
    Mat3 r;
    r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
    return r;
  }
  static constexpr Mat3 zero() { return {}; }
  static constexpr Mat3 diagonal(double a, double b, double c) {
    Mat3 r;
    r.m[0][0] = a;
    r.m[1][1] = b;
    r.m[2][2] = c;
    return r;
  }
  static constexpr Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
    Mat3 r;
    for (int j = 0; j < 3; ++j) {
      r.m[0][j] = r0[j];
      r.m[1][j] = r1[j];
      r.m[2][j] = r2[j];
    }
    return r;
  }
  static constexpr Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
      r.m[i][0] = c0[i];
      r.m[i][1] = c1[i];
      r.m[i][2] = c2[i];
    }
    return r;
  }
  /// u v^T
  static constexpr Mat3 outer(const Vec3& u, const Vec3& v) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = u[i] * v[j];
    return r;
  }

  constexpr double operator()(int i, int j) const { return m[i][j]; }
  constexpr double& operator()(int i, int j) { return m[i][j]; }

  constexpr Vec3 row(int i) const { return {m[i][0], m[i][1], m[i][2]}; }
  constexpr Vec3 column(int j) const { return {m[0][j], m[1][j], m[2][j]}; }

  constexpr Mat3 operator+(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
    return r;
  }
  constexpr Mat3 operator-(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] - o.m[i][j];
    return r;
  }
  constexpr Mat3 operator-() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = -m[i][j];
    return r;
  }
  constexpr Mat3 operator*(double s) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] * s;
    return r;
  }
  constexpr Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j] + m[i][2] * o.m[2][j];
    return r;
  }
  constexpr Vec3 operator*(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }

  constexpr Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }
  constexpr double trace() const { return m[0][0] + m[1][1] + m[2][2]; }
  constexpr double determinant() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }
  double frobenius_norm() const {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += m[i][j] * m[i][j];
    return std::sqrt(s);
  }
  bool all_finite() const {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (!std::isfinite(m[i][j])) return false;
    return true;
  }
  double max_abs_asymmetry() const {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) s = std::max(s, std::abs(m[i][j] - m[j][i]));
    return s;
  }
};

constexpr Mat3 operator*(double s, const Mat3& a) { return a * s; }

/// tr(a^T b), the Frobenius inner product.
constexpr double frobenius_inner(const Mat3& a, const Mat3& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += a.m[i][j] * b.m[i][j];
  return s;
}

/// Eigen-decomposition of a symmetric 3x3 matrix. Eigenvalues ascending,
/// eigenvectors orthonormal with the largest-magnitude component positive.
struct SymEigen3 {
  double values[3];
  Vec3 vectors[3];
  /// 0 = all distinct, 1 = lower pair equal, 2 = upper pair equal, 3 = isotropic.
  int degeneracy;

  bool distinct() const { return degeneracy == 0; }
};

/// Analytic eigenvalues (trigonometric root formula) with one Newton polish
/// step on the characteristic polynomial, then eigenvectors by row cross
/// products with deterministic completion for repeated eigenvalues.
/// Pre: a symmetric.
SymEigen3 sym_eigen(const Mat3& a);

/// Singular value decomposition m = u * diag(sigma) * v^T with sigma
/// descending, built from the symmetric eigensolver on m^T m.
struct Svd3 {
  Mat3 u;
  double sigma[3];
  Mat3 v;
};
Svd3 svd3(const Mat3& m);

/// Nearest matrix in SO(3) in the Frobenius sense (special orthogonal polar
/// factor): u * diag(1, 1, det(u v^T)) * v^T from the SVD, the sign applied
/// to the smallest singular direction.
Mat3 nearest_rotation_matrix(const Mat3& m);

}  // namespace attkit
