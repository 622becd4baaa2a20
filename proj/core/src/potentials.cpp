#include "attkit/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace attkit {

WeightMatrix WeightMatrix::identity() {
  WeightMatrix w;
  w.finish(Mat3::identity());
  return w;
}

WeightMatrix WeightMatrix::from_matrix(const Mat3& a) {
  if (!a.all_finite()) throw std::invalid_argument("WeightMatrix: non-finite entries");
  if (a.max_abs_asymmetry() > 1e-12)
    throw std::invalid_argument("WeightMatrix: matrix not symmetric");
  WeightMatrix w;
  w.finish((a + a.transposed()) * 0.5);
  return w;
}

WeightMatrix WeightMatrix::from_vectors(std::span<const Vec3> a, std::span<const double> rho) {
  if (a.size() != rho.size()) throw std::invalid_argument("WeightMatrix: size mismatch");
  if (a.size() < 3) throw std::invalid_argument("WeightMatrix: need at least 3 vectors");
  Mat3 acc = Mat3::zero();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (rho[i] <= 0.0) throw std::invalid_argument("WeightMatrix: weights must be positive");
    acc = acc + rho[i] * Mat3::outer(a[i], a[i]);
  }
  WeightMatrix w;
  w.finish(acc);
  return w;
}

void WeightMatrix::finish(const Mat3& a) {
  a_ = a;
  abar_ = (Mat3::identity() * a.trace() - a) * 0.5;
  aunder_ = Mat3::identity() * (abar_ * abar_).trace() - 2.0 * (abar_ * abar_);
  eig_ = sym_eigen(a_);
  // abar shares eigenvectors with A: lambda_i(abar) = (tr(A) - lambda_i(A))/2.
  lam_min_bar_ = 0.5 * (a.trace() - eig_.values[2]);
  lam_max_bar_ = 0.5 * (a.trace() - eig_.values[0]);
  if (lam_min_bar_ <= 1e-9)
    throw std::invalid_argument(
        "WeightMatrix: (tr(A) I - A)/2 not positive definite (rank-deficient or "
        "collinear vector set)");
  xi_ = lam_min_bar_ / lam_max_bar_;
}

double u_potential(const WeightMatrix& w, const Rotation& x) {
  return trace_error(w.a(), x) / (4.0 * w.lambda_max_bar());
}

Mat3 grad_u_potential(const WeightMatrix& w, const Rotation& x) {
  return x.matrix() * skew_part(w.a() * x.matrix()) * (1.0 / (4.0 * w.lambda_max_bar()));
}

double v_potential(const WeightMatrix& w, const Rotation& x) {
  const double u = u_potential(w, x);
  return 2.0 * (1.0 - std::sqrt(std::max(1.0 - u, 0.0)));
}

Mat3 grad_v_potential(const WeightMatrix& w, const Rotation& x) {
  const double u = u_potential(w, x);
  if (u >= 1.0 - kSingularityGuard)
    throw SingularityFault("grad_v_potential: singular set reached (u = " + std::to_string(u) +
                           ")");
  return grad_u_potential(w, x) * (1.0 / std::sqrt(1.0 - u));
}

bool in_s_pi(const WeightMatrix& w, const Rotation& x, double tol) {
  if (rotation_distance(x) < 1.0 - tol) return false;
  if (w.eigen_degeneracy() == 3) return true;
  // Rotation axis: at a (near) half turn the quaternion vector part is the
  // axis up to sign.
  const Vec3 axis = rot_to_quat(x).eps.normalized();
  auto angle_to = [&axis](const Vec3& v) {
    return std::asin(std::clamp(axis.cross(v).norm(), 0.0, 1.0));
  };
  if (w.eigen_degeneracy() == 0) {
    double best = angle_to(w.eigenvector(0));
    best = std::min(best, angle_to(w.eigenvector(1)));
    best = std::min(best, angle_to(w.eigenvector(2)));
    return best <= tol;
  }
  // One repeated pair: eigenvectors are the isolated direction plus any
  // direction in the orthogonal plane.
  const int isolated = w.eigen_degeneracy() == 1 ? 2 : 0;
  const Vec3 n = w.eigenvector(isolated);
  const double to_isolated = angle_to(n);
  const double to_plane = std::asin(std::clamp(std::abs(axis.dot(n)), 0.0, 1.0));
  return std::min(to_isolated, to_plane) <= tol;
}

}  // namespace attkit
