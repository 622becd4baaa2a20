#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "attkit/sim.hpp"

namespace attkit {

/// One verification item: a named property checked over seeded random
/// samples, with a human-readable measurement in detail.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};
using CheckList = std::vector<CheckResult>;

struct CheckOptions {
  std::uint64_t seed = 20250810;
  bool quick = false;  // reduced sample counts for fast unit runs
  int threads = 1;
};

/// Algebraic identities of the rotation kernel on random instances
/// (1e-12 absolute on unit-scale inputs).
CheckList run_identity_checks(const CheckOptions& opt = {});

/// Central finite differences of the composite potentials against their
/// gradients along random flow-set directions, for all four designs.
CheckList run_gradient_checks(const CheckOptions& opt = {});

/// Warped-distance sandwich, transport matrix determinant margin, the
/// quaternion form of the warp, and the warp transport identity.
CheckList run_warp_bound_checks(const CheckOptions& opt = {});

/// Flow-set exclusion margin of the warped potential and the hysteresis
/// gap at states steered onto the critical set, for all four designs.
CheckList run_synergy_checks(const CheckOptions& opt = {});

/// Equivalence of the measurement-only observer terms with the
/// warped-potential path, plus the k = 0 degenerations.
CheckList run_explicit_oracle_checks(const CheckOptions& opt = {});

/// Ball-projection properties on random updates.
CheckList run_projection_checks(const CheckOptions& opt = {});

/// Hybrid execution invariants on the two built-in studies: monotone
/// diagnostic energy along flows, minimum decrease at jumps, jump-count
/// budget, no late jumps, orthonormality drift.
CheckList run_executor_checks(const CheckOptions& opt = {});

/// Everything above, in order.
CheckList run_all_checks(const CheckOptions& opt = {});

inline bool all_passed(const CheckList& list) {
  for (const CheckResult& c : list)
    if (!c.passed) return false;
  return true;
}

}  // namespace attkit
