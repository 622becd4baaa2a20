#pragma once

#include <stdexcept>
#include <string>

namespace attkit {

/// Runtime fault raised when numerics leave the region where the theory
/// guarantees well-posedness. Configuration mistakes (bad arguments,
/// inadmissible gains) use std::invalid_argument instead.
struct Fault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Gradient of the non-smooth potential requested at or next to its
/// singular set (the guard is never active on the flow set).
struct SingularityFault : Fault {
  using Fault::Fault;
};

/// A matrix that should track SO(3) drifted outside the trust radius of the
/// re-orthonormalization routine.
struct DriftFault : Fault {
  using Fault::Fault;
};

}  // namespace attkit
