#pragma once

#include <cstdint>
#include <random>

#include "attkit/so3.hpp"

namespace attkit {

/// Deterministic sampling helpers shared by diagnostics and property
/// suites. All draw from a caller-owned engine so runs are reproducible
/// from a single seed.
inline Vec3 random_unit_vec(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v{n(rng), n(rng), n(rng)};
  while (v.norm() < 1e-6) v = Vec3{n(rng), n(rng), n(rng)};
  return v.normalized();
}

inline Vec3 random_vec(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

inline UnitQuaternion random_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  double e = n(rng);
  Vec3 v{n(rng), n(rng), n(rng)};
  double s = std::sqrt(e * e + v.squared_norm());
  while (s < 1e-6) {
    e = n(rng);
    v = Vec3{n(rng), n(rng), n(rng)};
    s = std::sqrt(e * e + v.squared_norm());
  }
  return {e / s, v / s};
}

/// Haar-uniform rotation.
inline Rotation random_rotation(std::mt19937_64& rng) {
  return quat_to_rot(random_quaternion(rng));
}

}  // namespace attkit
