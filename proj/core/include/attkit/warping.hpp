#pragma once

#include <cstdint>
#include <vector>

#include "attkit/potentials.hpp"

namespace attkit {

/// Admissible warp gain upper bound: 1/sqrt(6 - max(1, 4 xi^2)), always in
/// [1/sqrt(5), 1/sqrt(2)]. Pre: 0 < xi <= 1.
double k_bar(double xi);

/// Lower/upper factors bounding the warped distance:
/// low = 1 - k^2 - k sqrt(1-k^2), high = 1 + k + k^2/4.
struct GammaBounds {
  double low, high;
};
GammaBounds gamma_bounds(double k);

/// Warp parameters: weight matrix, gain k and the switchable axis table
/// nu(q), indexed 0-based. k = 0 is accepted and makes the warp the
/// identity (the smooth-observer degeneration); hybrid configurations
/// require 0 < k < k_bar(xi).
struct WarpParams {
  WeightMatrix weight;
  double k = 0.0;
  std::vector<Vec3> axes;

  static WarpParams make(WeightMatrix weight, double k, std::vector<Vec3> axes);
  std::size_t q_count() const { return axes.size(); }
  const Vec3& nu(std::size_t q) const { return axes[q]; }
};

/// Count of defensive asin-argument clamps since process start (or the last
/// reset). k < k_bar makes activation impossible in exact arithmetic, so a
/// nonzero count signals a misconfiguration.
std::uint64_t warp_clamp_count();
void reset_warp_clamp_count();

/// Clamp a warp-angle sine argument into (-1, 1), counting activations.
double clamped_warp_arg(double v);

/// Inner warp rotation about nu(q) by 2 asin(k U_A(X)).
Rotation warp_rotation(const WarpParams& p, const Rotation& x, std::size_t q);
/// Same, for a precomputed potential value u.
Rotation warp_rotation_for_value(const WarpParams& p, double u, std::size_t q);

/// Angular warping: X composed with the inner warp rotation.
Rotation gamma(const WarpParams& p, const Rotation& x, std::size_t q);

/// Transport matrix of the warping: along Xdot = X hat(u),
/// d/dt gamma(X, q) = gamma(X, q) hat(theta_matrix(X, q) u). Full rank for
/// admissible k.
Mat3 theta_matrix(const WarpParams& p, const Rotation& x, std::size_t q);

enum class PotentialKind { U, V };

/// Composite potential: U_A or V_A evaluated after the warp.
double phi_composite(const WarpParams& p, PotentialKind kind, const Rotation& x, std::size_t q);

/// All q at once, sharing the U_A(X) evaluation.
std::vector<double> phi_composite_all(const WarpParams& p, PotentialKind kind, const Rotation& x);

/// Gradient of the composite potential at X:
///   U kind: X hat(theta^T psi(A gamma)) / (4 lambda_max(abar))
///   V kind: the U-kind gradient / sqrt(1 - phi_U), guarded like
///           grad_v_potential.
Mat3 grad_phi_composite(const WarpParams& p, PotentialKind kind, const Rotation& x,
                        std::size_t q);

/// Quadratic sandwich coefficients for the composite potential. alpha1 and
/// alpha2 are the closed forms (xi*gamma_low and gamma_high resp.
/// 2*gamma_high); alpha3/alpha4 have no closed form and are estimated by
/// sampling flow-set points (rejection against the hysteresis condition)
/// and extremizing ||grad phi||_F^2 / |X|_I^2. Diagnostic only.
struct AlphaEstimate {
  double alpha1 = 0.0, alpha2 = 0.0;          // closed forms
  double alpha1_sampled = 0.0, alpha2_sampled = 0.0;  // extremized phi / |X|_I^2
  double alpha3 = 0.0, alpha4 = 0.0;          // sampled over the flow set
  std::size_t samples = 0;       // drawn
  std::size_t flow_samples = 0;  // kept by rejection
};
AlphaEstimate estimate_alphas(const WarpParams& p, PotentialKind kind, double delta,
                              std::size_t n_samples, std::uint64_t seed, int n_threads = 1);

}  // namespace attkit
