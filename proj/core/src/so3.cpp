#include "attkit/so3.hpp"

#include <algorithm>
#include <cmath>

namespace attkit {

Rotation Rotation::from_matrix(const Mat3& m) {
  if (!m.all_finite()) throw std::invalid_argument("Rotation: non-finite entries");
  const double ortho = (m.transposed() * m - Mat3::identity()).frobenius_norm();
  if (ortho > kRotationTol)
    throw std::invalid_argument("Rotation: matrix not orthonormal (error " +
                                std::to_string(ortho) + ")");
  if (std::abs(m.determinant() - 1.0) > kRotationTol)
    throw std::invalid_argument("Rotation: determinant not +1");
  return Rotation(m, 0);
}

double Rotation::orthonormality_error() const {
  return (m_.transposed() * m_ - Mat3::identity()).frobenius_norm();
}

UnitQuaternion UnitQuaternion::from_parts(double eta, const Vec3& eps) {
  UnitQuaternion q{eta, eps};
  if (q.norm_error() > kUnitQuaternionTol)
    throw std::invalid_argument("UnitQuaternion: not unit norm");
  return q;
}

double rotation_distance(const Rotation& x) {
  const double d = (3.0 - x.matrix().trace()) / 4.0;
  return std::clamp(d, 0.0, 1.0);
}

Rotation angle_axis_to_rot(double theta, const Vec3& u) {
  if (std::abs(u.norm() - 1.0) > kRotationTol)
    throw std::invalid_argument("angle_axis_to_rot: axis not unit norm");
  const Mat3 k = hat(u);
  const Mat3 r = Mat3::identity() + std::sin(theta) * k + (1.0 - std::cos(theta)) * (k * k);
  return Rotation::from_matrix_unchecked(r);
}

Rotation exp_so3(const Vec3& w) {
  const double theta2 = w.squared_norm();
  const double theta = std::sqrt(theta2);
  double s, c;  // sin(theta)/theta and (1-cos(theta))/theta^2
  if (theta < 1e-8) {
    s = 1.0 - theta2 / 6.0;
    c = 0.5 - theta2 / 24.0;
  } else {
    s = std::sin(theta) / theta;
    c = (1.0 - std::cos(theta)) / theta2;
  }
  const Mat3 k = hat(w);
  return Rotation::from_matrix_unchecked(Mat3::identity() + s * k + c * (k * k));
}

Rotation quat_to_rot(const UnitQuaternion& q) {
  const Mat3 k = hat(q.eps);
  return Rotation::from_matrix_unchecked(Mat3::identity() + 2.0 * (k * k) + 2.0 * q.eta * k);
}

UnitQuaternion rot_to_quat(const Rotation& x) {
  const Mat3& m = x.matrix();
  const double tr = m.trace();
  double eta;
  Vec3 eps;
  // Shepperd: pivot on the largest of (1+tr, 1+2*m_ii-tr).
  const double w2 = 1.0 + tr;
  const double x2 = 1.0 + 2.0 * m(0, 0) - tr;
  const double y2 = 1.0 + 2.0 * m(1, 1) - tr;
  const double z2 = 1.0 + 2.0 * m(2, 2) - tr;
  if (w2 >= x2 && w2 >= y2 && w2 >= z2) {
    const double w = std::sqrt(w2) * 0.5;
    eta = w;
    eps = Vec3{m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)} * (0.25 / w);
  } else if (x2 >= y2 && x2 >= z2) {
    const double q = std::sqrt(x2) * 0.5;
    eta = (m(2, 1) - m(1, 2)) * (0.25 / q);
    eps = {q, (m(0, 1) + m(1, 0)) * (0.25 / q), (m(0, 2) + m(2, 0)) * (0.25 / q)};
  } else if (y2 >= z2) {
    const double q = std::sqrt(y2) * 0.5;
    eta = (m(0, 2) - m(2, 0)) * (0.25 / q);
    eps = {(m(0, 1) + m(1, 0)) * (0.25 / q), q, (m(1, 2) + m(2, 1)) * (0.25 / q)};
  } else {
    const double q = std::sqrt(z2) * 0.5;
    eta = (m(1, 0) - m(0, 1)) * (0.25 / q);
    eps = {(m(0, 2) + m(2, 0)) * (0.25 / q), (m(1, 2) + m(2, 1)) * (0.25 / q), q};
  }
  // Renormalize once; the pivot keeps conditioning good everywhere.
  const double n = std::sqrt(eta * eta + eps.squared_norm());
  eta /= n;
  eps = eps / n;

  if (eta < -kUnitQuaternionTol) {
    eta = -eta;
    eps = -eps;
  } else if (std::abs(eta) <= kUnitQuaternionTol) {
    // Half turn: (0, eps) and (0, -eps) encode the same rotation. Pick the
    // representative whose largest-magnitude eps component is positive,
    // with near-ties resolved by the earliest index so the choice is
    // stable under rounding.
    double amax = std::abs(eps[0]);
    for (int i = 1; i < 3; ++i) amax = std::max(amax, std::abs(eps[i]));
    for (int i = 0; i < 3; ++i) {
      if (std::abs(eps[i]) >= (1.0 - 1e-9) * amax) {
        if (eps[i] < 0.0) {
          eta = -eta;
          eps = -eps;
        }
        break;
      }
    }
  }
  return {eta, eps};
}

UnitQuaternion quat_mul(const UnitQuaternion& q1, const UnitQuaternion& q2) {
  return {q1.eta * q2.eta - q1.eps.dot(q2.eps),
          q1.eta * q2.eps + q2.eta * q1.eps + q1.eps.cross(q2.eps)};
}

Mat3 e_matrix(const Mat3& a, const Rotation& x) {
  const Mat3 ax = a * x.matrix();
  return (Mat3::identity() * ax.trace() - x.matrix().transposed() * a) * 0.5;
}

double trace_error(const Mat3& a, const Rotation& x) {
  return (a * (Mat3::identity() - x.matrix())).trace();
}

Rotation orthonormalize(const Mat3& x) {
  if (!x.all_finite()) throw DriftFault("orthonormalize: non-finite input");
  const Mat3 q = nearest_rotation_matrix(x);
  const double dist = (x - q).frobenius_norm();
  if (dist > kOrthonormalizeTrustRadius)
    throw DriftFault("orthonormalize: input " + std::to_string(dist) +
                     " from SO(3), beyond trust radius");
  return Rotation::from_matrix_unchecked(q);
}

}  // namespace attkit
