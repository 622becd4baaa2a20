#pragma once

#include <span>

#include "attkit/warping.hpp"

namespace attkit {

/// The four hybrid configurations. D1/D2 warp about a full signed
/// orthonormal triple with an isotropic weight; D3/D4 warp about a single
/// signed axis chosen from the weight's eigensystem (distinct eigenvalues
/// required). Odd designs use the smooth potential, even ones the
/// non-smooth.
enum class Design { D1, D2, D3, D4 };

constexpr PotentialKind design_kind(Design d) {
  return (d == Design::D1 || d == Design::D3) ? PotentialKind::U : PotentialKind::V;
}
const char* to_string(Design d);

/// Eigenvalue functional entering the D3/D4 gap bound. Branches on the
/// sign of l2 l3 - l1 l2 - l1 l3. Pre: distinct eigenvalues.
double lambda_branch(const WeightMatrix& w);

/// Largest admissible hysteresis gap for a design at gain k:
///   D1: (-1 + sqrt(1 + 4 k^2))^3 / (24 k^4)
///   D2: 2 sqrt(D1)
///   D3: 4 k^2 V^2 (1 - k^2 V^2) L with V = (-1 + sqrt(1 + 4 k^2 xi L))/(2 k^2 L)
///   D4: 2 (-sqrt(1 - xi) + sqrt(1 - xi + D3))
/// Pre: 0 < k < k_bar(xi); D3/D4 need distinct eigenvalues.
double delta_bound(Design d, const WeightMatrix& w, double k);

/// Warp axis for D3/D4: unit vector with prescribed squared projections on
/// the eigenvectors, branch-dependent. Deterministic: eigenvectors are
/// sign-normalized and all projection coefficients taken nonnegative (the
/// antipode is covered by nu(1) = -u).
Vec3 choose_axis_d3(const WeightMatrix& w);

struct HybridConfig {
  Design variant;
  WarpParams warp;
  double delta;        // hysteresis gap
  double delta_bound;  // admissible upper bound at (weight, k)
  PotentialKind kind;

  std::size_t q_count() const { return warp.q_count(); }
};

/// Builds the full configuration: axis table (D1/D2: +-canonical basis;
/// D3/D4: +-choose_axis_d3), gap = delta_fraction * delta_bound.
/// Pre: 0 < delta_fraction < 1, 0 < k < k_bar(xi).
HybridConfig make_config(Design d, const WeightMatrix& w, double k, double delta_fraction);

/// Potential values for every index at the current attitude error.
std::vector<double> phi_all(const HybridConfig& c, const Rotation& x);

/// Hysteresis on precomputed per-index values: flow while
/// phi[q] - min <= delta, jump allowed when >= delta; both hold on the
/// equality band.
bool in_flow_values(std::span<const double> phi, std::size_t q, double delta);
bool in_jump_values(std::span<const double> phi, std::size_t q, double delta);
/// Smallest index attaining the minimum.
std::size_t argmin_index(std::span<const double> phi);

bool in_flow(const HybridConfig& c, const Rotation& x, std::size_t q);
bool in_jump(const HybridConfig& c, const Rotation& x, std::size_t q);
/// argmin over the index set; callers invoke it from the jump set, where
/// the decrease is at least delta.
std::size_t jump_map(const HybridConfig& c, const Rotation& x, std::size_t q);

}  // namespace attkit
