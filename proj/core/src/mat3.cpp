#include "attkit/mat3.hpp"

#include <algorithm>
#include <cmath>

namespace attkit {
namespace {

// Largest-magnitude component made positive. Components within a relative
// band of the maximum count as tied and the earliest wins, so the sign
// convention is stable when two components agree in magnitude up to
// rounding (which happens for structured inputs).
Vec3 sign_normalized(const Vec3& v) {
  double amax = std::abs(v[0]);
  for (int i = 1; i < 3; ++i) amax = std::max(amax, std::abs(v[i]));
  for (int i = 0; i < 3; ++i) {
    if (std::abs(v[i]) >= (1.0 - 1e-9) * amax) return v[i] < 0.0 ? -v : v;
  }
  return v;
}

// One Newton step on p(x) = x^3 - c2 x^2 + c1 x - c0.
double newton_polish(double x, double c2, double c1, double c0) {
  const double p = ((x - c2) * x + c1) * x - c0;
  const double dp = (3.0 * x - 2.0 * c2) * x + c1;
  if (std::abs(dp) > 1e-30) x -= p / dp;
  return x;
}

// Eigenvector of (a - lambda I) via the best-conditioned cross product of
// its rows. Returns false when the row space is too degenerate (repeated
// eigenvalue), in which case the caller completes a basis instead.
bool eigenvector_for(const Mat3& a, double lambda, double scale, Vec3* out) {
  Mat3 b = a;
  b(0, 0) -= lambda;
  b(1, 1) -= lambda;
  b(2, 2) -= lambda;
  const Vec3 r0 = b.row(0), r1 = b.row(1), r2 = b.row(2);
  const Vec3 c01 = r0.cross(r1), c02 = r0.cross(r2), c12 = r1.cross(r2);
  const double n01 = c01.squared_norm(), n02 = c02.squared_norm(), n12 = c12.squared_norm();
  Vec3 best = c01;
  double nbest = n01;
  if (n02 > nbest) {
    best = c02;
    nbest = n02;
  }
  if (n12 > nbest) {
    best = c12;
    nbest = n12;
  }
  if (nbest <= 1e-24 * scale * scale * scale * scale) return false;
  *out = best / std::sqrt(nbest);
  return true;
}

Vec3 any_unit_orthogonal(const Vec3& v) {
  // Start from the axis least aligned with v.
  int imin = 0;
  double amin = std::abs(v[0]);
  for (int i = 1; i < 3; ++i) {
    if (std::abs(v[i]) < amin) {
      amin = std::abs(v[i]);
      imin = i;
    }
  }
  Vec3 e = Vec3::zero();
  e.set(imin, 1.0);
  return (e - v * e.dot(v)).normalized();
}

}  // namespace

SymEigen3 sym_eigen(const Mat3& a) {
  SymEigen3 out{};
  const double a00 = a(0, 0), a11 = a(1, 1), a22 = a(2, 2);
  const double a01 = a(0, 1), a02 = a(0, 2), a12 = a(1, 2);

  const double off = a01 * a01 + a02 * a02 + a12 * a12;
  double vals[3];
  if (off == 0.0) {
    vals[0] = a00;
    vals[1] = a11;
    vals[2] = a22;
  } else {
    const double q = a.trace() / 3.0;
    const double p2 = (a00 - q) * (a00 - q) + (a11 - q) * (a11 - q) + (a22 - q) * (a22 - q) +
                      2.0 * off;
    const double p = std::sqrt(p2 / 6.0);
    Mat3 b = (a - Mat3::identity() * q) * (1.0 / p);
    double r = b.determinant() / 2.0;
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double two_pi_3 = 2.0943951023931953;
    vals[2] = q + 2.0 * p * std::cos(phi);
    vals[0] = q + 2.0 * p * std::cos(phi + two_pi_3);
    vals[1] = 3.0 * q - vals[0] - vals[2];

    // Characteristic polynomial x^3 - c2 x^2 + c1 x - c0.
    const double c2 = a.trace();
    const double c1 = a00 * a11 + a00 * a22 + a11 * a22 - a01 * a01 - a02 * a02 - a12 * a12;
    const double c0 = a.determinant();
    for (double& v : vals) v = newton_polish(v, c2, c1, c0);
  }
  std::sort(vals, vals + 3);

  const double scale = std::max({std::abs(vals[0]), std::abs(vals[2]), 1e-300});
  const double gap_tol = 1e-7 * std::max(scale, 1.0);
  const bool low_pair = (vals[1] - vals[0]) <= gap_tol;
  const bool high_pair = (vals[2] - vals[1]) <= gap_tol;

  for (int i = 0; i < 3; ++i) out.values[i] = vals[i];

  if (low_pair && high_pair) {
    out.degeneracy = 3;
    out.vectors[0] = Vec3::unit_x();
    out.vectors[1] = Vec3::unit_y();
    out.vectors[2] = Vec3::unit_z();
    return out;
  }
  if (low_pair || high_pair) {
    out.degeneracy = low_pair ? 1 : 2;
    const int isolated = low_pair ? 2 : 0;
    Vec3 v;
    if (!eigenvector_for(a, vals[isolated], scale, &v)) v = Vec3::unit_z();
    v = sign_normalized(v);
    const Vec3 p1 = any_unit_orthogonal(v);
    const Vec3 p2 = v.cross(p1);
    if (low_pair) {
      out.vectors[0] = sign_normalized(p1);
      out.vectors[1] = sign_normalized(p2);
      out.vectors[2] = v;
    } else {
      out.vectors[0] = v;
      out.vectors[1] = sign_normalized(p1);
      out.vectors[2] = sign_normalized(p2);
    }
    return out;
  }

  out.degeneracy = 0;
  Vec3 v0, v2;
  if (!eigenvector_for(a, vals[0], scale, &v0)) v0 = Vec3::unit_x();
  if (!eigenvector_for(a, vals[2], scale, &v2)) v2 = Vec3::unit_z();
  // Re-orthogonalize and rebuild the middle vector so the basis is
  // orthonormal to machine precision.
  v2 = (v2 - v0 * v2.dot(v0)).normalized();
  const Vec3 v1 = v2.cross(v0);
  out.vectors[0] = sign_normalized(v0);
  out.vectors[1] = sign_normalized(v1);
  out.vectors[2] = sign_normalized(v2);
  return out;
}

namespace {

// Cyclic Jacobi for symmetric 3x3. Robust for clustered spectra (the
// analytic path loses eigenvector accuracy there), so the SVD below uses
// this one. Eigenvalues ascending, eigenvectors orthonormal by
// construction.
SymEigen3 sym_eigen_jacobi(const Mat3& a_in) {
  Mat3 a = a_in;
  Mat3 v = Mat3::identity();
  const double scale = std::max(a.frobenius_norm(), 1e-300);
  for (int sweep = 0; sweep < 50; ++sweep) {
    const double off = std::sqrt(a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2));
    if (off <= 1e-15 * scale) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // A <- J^T A J and V <- V J with J the (p,q) rotation.
        for (int k = 0; k < 3; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  int order[3] = {0, 1, 2};
  for (int i = 0; i < 2; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (a(order[j], order[j]) < a(order[i], order[i])) std::swap(order[i], order[j]);
  SymEigen3 out{};
  for (int i = 0; i < 3; ++i) {
    out.values[i] = a(order[i], order[i]);
    out.vectors[i] = sign_normalized(v.column(order[i]));
  }
  out.degeneracy = 0;
  return out;
}

}  // namespace

Svd3 svd3(const Mat3& m) {
  Svd3 out{};
  const SymEigen3 es = sym_eigen_jacobi(m.transposed() * m);
  // Descending singular values.
  double sig[3];
  Vec3 vcols[3];
  for (int i = 0; i < 3; ++i) {
    sig[i] = std::sqrt(std::max(es.values[2 - i], 0.0));
    vcols[i] = es.vectors[2 - i];
  }
  Vec3 ucols[3];
  const double cutoff = 1e-12 * std::max(sig[0], 1e-300);
  int rank = 0;
  for (int i = 0; i < 3; ++i) {
    if (sig[i] > cutoff) {
      ucols[i] = (m * vcols[i]) / sig[i];
      ++rank;
    }
  }
  // Re-orthonormalize the left basis (ill-conditioned input degrades it by
  // the condition number times machine precision) and complete it for
  // rank-deficient input. Rebuilding the third column as a cross product
  // can flip it relative to m*v/sigma; that is harmless because the
  // determinant correction below multiplies exactly that column.
  if (rank >= 2) {
    ucols[0] = ucols[0].normalized();
    ucols[1] = (ucols[1] - ucols[0] * ucols[1].dot(ucols[0])).normalized();
    ucols[2] = ucols[0].cross(ucols[1]);
  } else if (rank == 1) {
    ucols[0] = ucols[0].normalized();
    ucols[1] = any_unit_orthogonal(ucols[0]);
    ucols[2] = ucols[0].cross(ucols[1]);
  } else {
    ucols[0] = Vec3::unit_x();
    ucols[1] = Vec3::unit_y();
    ucols[2] = Vec3::unit_z();
  }
  out.u = Mat3::from_columns(ucols[0], ucols[1], ucols[2]);
  out.v = Mat3::from_columns(vcols[0], vcols[1], vcols[2]);
  for (int i = 0; i < 3; ++i) out.sigma[i] = sig[i];
  return out;
}

Mat3 nearest_rotation_matrix(const Mat3& m) {
  const Svd3 s = svd3(m);
  const double d = (s.u * s.v.transposed()).determinant();
  const Mat3 fix = Mat3::diagonal(1.0, 1.0, d < 0.0 ? -1.0 : 1.0);
  return s.u * fix * s.v.transposed();
}

}  // namespace attkit
