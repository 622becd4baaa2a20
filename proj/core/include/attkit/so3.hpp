#pragma once

#include "attkit/faults.hpp"
#include "attkit/mat3.hpp"

namespace attkit {

inline constexpr double kRotationTol = 1e-9;        // constructor validation
inline constexpr double kUnitQuaternionTol = 1e-12;

/// Element of SO(3): orthonormal 3x3 matrix with determinant +1.
/// Validated on entry through from_matrix; operations that preserve the
/// group (products, transposes, exponentials) skip re-validation.
class Rotation {
 public:
  Rotation() : m_(Mat3::identity()) {}

  /// Validates orthonormality and determinant within kRotationTol.
  static Rotation from_matrix(const Mat3& m);
  /// For callers that guarantee the invariant algebraically.
  static Rotation from_matrix_unchecked(const Mat3& m) { return Rotation(m, 0); }

  const Mat3& matrix() const { return m_; }
  Rotation transposed() const { return Rotation(m_.transposed(), 0); }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }
  Rotation operator*(const Rotation& o) const { return Rotation(m_ * o.m_, 0); }

  /// ||R^T R - I||_F, the orthonormality drift.
  double orthonormality_error() const;

 private:
  Rotation(const Mat3& m, int) : m_(m) {}
  Mat3 m_;
};

/// Unit quaternion (eta, eps) with eta the scalar part; eta^2 + |eps|^2 = 1.
struct UnitQuaternion {
  double eta = 1.0;
  Vec3 eps = Vec3::zero();

  static UnitQuaternion identity() { return {}; }
  /// Validates unit norm within kUnitQuaternionTol.
  static UnitQuaternion from_parts(double eta, const Vec3& eps);

  UnitQuaternion conjugate() const { return {eta, -eps}; }
  double norm_error() const { return std::abs(eta * eta + eps.squared_norm() - 1.0); }
};

/// Angle-axis pair; axis must be unit norm.
struct AngleAxis {
  double theta = 0.0;
  Vec3 axis = Vec3::unit_x();
};

/// Skew-symmetric matrix of u: hat(u) v = u x v.
constexpr Mat3 hat(const Vec3& u) {
  Mat3 r;
  r(0, 1) = -u.z;
  r(0, 2) = u.y;
  r(1, 0) = u.z;
  r(1, 2) = -u.x;
  r(2, 0) = -u.y;
  r(2, 1) = u.x;
  return r;
}

/// Inverse of hat on skew-symmetric input.
constexpr Vec3 vee(const Mat3& s) { return {s(2, 1), s(0, 2), s(1, 0)}; }

/// Skew-symmetric part (a - a^T)/2.
constexpr Mat3 skew_part(const Mat3& a) { return (a - a.transposed()) * 0.5; }

/// vee of the skew-symmetric part: (a32-a23, a13-a31, a21-a12)/2.
constexpr Vec3 psi(const Mat3& a) {
  return {0.5 * (a(2, 1) - a(1, 2)), 0.5 * (a(0, 2) - a(2, 0)), 0.5 * (a(1, 0) - a(0, 1))};
}

/// Normalized distance |X|_I^2 = tr(I - X)/4 in [0, 1].
double rotation_distance(const Rotation& x);

/// Rodrigues formula. Pre: |u| = 1 (validated within kRotationTol).
Rotation angle_axis_to_rot(double theta, const Vec3& u);
inline Rotation angle_axis_to_rot(const AngleAxis& aa) {
  return angle_axis_to_rot(aa.theta, aa.axis);
}

/// exp(hat(w)), series-safe at w = 0. Stays on SO(3) to machine precision.
Rotation exp_so3(const Vec3& w);

Rotation quat_to_rot(const UnitQuaternion& q);

/// Shepperd-style extraction covering all rotations including half turns.
/// Sign convention: eta >= 0; when eta is zero (within 1e-12) the largest
/// magnitude component of eps is made positive, so round trips are
/// deterministic.
UnitQuaternion rot_to_quat(const Rotation& x);

UnitQuaternion quat_mul(const UnitQuaternion& q1, const UnitQuaternion& q2);

/// E(A, X) = (tr(A X) I - X^T A)/2.
Mat3 e_matrix(const Mat3& a, const Rotation& x);

/// tr(A (I - X)).
double trace_error(const Mat3& a, const Rotation& x);

/// Nearest rotation in the polar-factor sense, via the 3x3 SVD. Throws
/// DriftFault when the input is farther than 0.1 (Frobenius) from SO(3).
Rotation orthonormalize(const Mat3& x);

inline constexpr double kOrthonormalizeTrustRadius = 0.1;

}  // namespace attkit
