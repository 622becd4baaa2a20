#pragma once

#include <span>
#include <vector>

#include "attkit/so3.hpp"

namespace attkit {

/// Guard band for the non-smooth potential: taking its gradient with
/// u_potential >= 1 - kSingularityGuard raises SingularityFault. On the
/// hybrid flow set the guard is unreachable, so an activation means the
/// integrator left the flow set and must be surfaced, not clamped.
inline constexpr double kSingularityGuard = 1e-9;

/// Symmetric weight matrix A with the derived quantities used everywhere:
/// abar = (tr(A) I - A)/2 (must be positive definite), aunder =
/// tr(abar^2) I - 2 abar^2, the eigensystem of A, and the eigenvalue ratio
/// xi = lambda_min(abar)/lambda_max(abar).
class WeightMatrix {
 public:
  static WeightMatrix identity();

  /// From a symmetric matrix (asymmetry beyond 1e-12 rejected; the stored A
  /// is symmetrized exactly). Throws std::invalid_argument when abar is not
  /// positive definite.
  static WeightMatrix from_matrix(const Mat3& a);

  /// A = sum_i rho_i a_i a_i^T. Needs n >= 3 vectors spanning at least a
  /// plane (collinear sets are rejected) and positive weights.
  static WeightMatrix from_vectors(std::span<const Vec3> a, std::span<const double> rho);

  const Mat3& a() const { return a_; }
  const Mat3& abar() const { return abar_; }
  const Mat3& aunder() const { return aunder_; }

  /// Eigenvalues of A, ascending.
  double eigenvalue(int i) const { return eig_.values[i]; }
  /// Matching orthonormal eigenvectors of A (shared with abar).
  const Vec3& eigenvector(int i) const { return eig_.vectors[i]; }
  int eigen_degeneracy() const { return eig_.degeneracy; }
  bool has_distinct_eigenvalues() const { return eig_.degeneracy == 0; }

  double lambda_min_bar() const { return lam_min_bar_; }
  double lambda_max_bar() const { return lam_max_bar_; }
  double xi() const { return xi_; }

 private:
  WeightMatrix() = default;
  void finish(const Mat3& a);

  Mat3 a_, abar_, aunder_;
  SymEigen3 eig_{};
  double lam_min_bar_ = 0.0, lam_max_bar_ = 0.0, xi_ = 0.0;
};

/// U_A(X) = tr(A (I - X)) / (4 lambda_max(abar)), in [0, 1].
double u_potential(const WeightMatrix& w, const Rotation& x);

/// Gradient of U_A at X (tangent there): X P_a(A X) / (4 lambda_max(abar)).
Mat3 grad_u_potential(const WeightMatrix& w, const Rotation& x);

/// V_A(X) = 2 (1 - sqrt(1 - U_A(X))), in [0, 2].
double v_potential(const WeightMatrix& w, const Rotation& x);

/// grad U_A / sqrt(1 - U_A). Throws SingularityFault when
/// U_A >= 1 - kSingularityGuard.
Mat3 grad_v_potential(const WeightMatrix& w, const Rotation& x);

/// True when X is a half turn (|X|_I^2 >= 1 - tol) about an axis within tol
/// of an eigenvector of A. For isotropic A every axis qualifies.
bool in_s_pi(const WeightMatrix& w, const Rotation& x, double tol = 1e-6);

}  // namespace attkit
