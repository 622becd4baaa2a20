#pragma once

#include <optional>
#include <string>

#include "attkit/design.hpp"

namespace attkit {

/// Estimator variants. The four hybrid observers pair the switching designs
/// with either a reconstructed attitude (1, 2) or direct vector
/// measurements (3, 4). The two smooth observers are the k = 0
/// degenerations used as baselines.
enum class ObserverMode { Hybrid1, Hybrid2, Hybrid3, Hybrid4, Smooth1, Smooth2 };

constexpr bool is_hybrid(ObserverMode m) {
  return m == ObserverMode::Hybrid1 || m == ObserverMode::Hybrid2 ||
         m == ObserverMode::Hybrid3 || m == ObserverMode::Hybrid4;
}
/// Modes whose innovation needs a reconstructed attitude.
constexpr bool needs_attitude_source(ObserverMode m) {
  return m == ObserverMode::Hybrid1 || m == ObserverMode::Hybrid2 || m == ObserverMode::Smooth1;
}
constexpr Design mode_design(ObserverMode m) {
  switch (m) {
    case ObserverMode::Hybrid1: return Design::D1;
    case ObserverMode::Hybrid2: return Design::D2;
    case ObserverMode::Hybrid3: return Design::D3;
    default: return Design::D4;
  }
}
const char* to_string(ObserverMode m);
std::optional<ObserverMode> parse_observer_mode(const std::string& s);

struct Gains {
  double gamma_p = 1.0;                   // attitude correction gain, > 0
  double gamma_i = 0.0;                   // bias adaptation gain, >= 0 (0 disables adaptation)
  std::optional<double> bias_bound;       // radius for the projection, > 0 when set

  void validate() const;
};

struct ObserverState {
  Rotation rhat;
  Vec3 bhat = Vec3::zero();
  std::size_t q = 0;
  long jumps = 0;
  double t = 0.0;
};

/// One synchronized sensor snapshot: rate reading plus paired body/inertial
/// vector sets (n >= 3, shared positive weights).
struct MeasurementSet {
  Vec3 omega_y;
  std::vector<Vec3> body;
  std::vector<Vec3> inertial;
  std::vector<double> rho;

  void validate() const;
};

/// Everything fixed over a run for one observer instance.
struct ObserverSetup {
  ObserverMode mode;
  WeightMatrix weight;                 // isotropic for modes 1/2 and smooth 1
  std::optional<HybridConfig> config;  // engaged for hybrid modes
  Gains gains;
};

/// Builds the per-mode setup from the scenario-level vector set and design
/// knobs. k and delta_fraction are ignored by the smooth modes.
ObserverSetup make_observer_setup(ObserverMode mode, std::span<const Vec3> inertial,
                                  std::span<const double> rho, double k, double delta_fraction,
                                  const Gains& gains);

/// Measurement-only quantities of the direct-measurement observers: the perturbed
/// vector mismatch phi_bar, the innovation beta_bar, the inner warp
/// rotation r_bar, its transport correction theta_bar, and vartheta (the
/// smooth mismatch that drives the warp angle).
struct ExplicitTerms {
  double phi_bar = 0.0;
  double vartheta = 0.0;
  Mat3 r_bar;
  Mat3 theta_bar;
  Vec3 beta_bar;
};

ExplicitTerms explicit_terms(const WeightMatrix& w, double k, const Vec3& nu,
                             const Rotation& rhat, const MeasurementSet& m);

/// Ball projection for the bias adaptation: identity inside the ball or for
/// inward updates, tangential component only on the boundary pointing out.
Vec3 proj_ball(const Vec3& mu, const Vec3& bhat, double bbar);

/// Weighted least-squares attitude from the paired vector sets (orthogonal
/// projection of sum rho_i a_i b_i^T onto SO(3)). Exact on noise-free
/// measurements.
Rotation reconstruct_attitude(const MeasurementSet& m);

/// Innovation vector from the attitude error: rhat^T vee(rtilde^T grad).
Vec3 beta_from_attitude(const HybridConfig& c, const Rotation& rhat, const Rotation& rtilde,
                        std::size_t q);

struct Innovation {
  double phi = 0.0;
  Vec3 beta = Vec3::zero();
};

/// Potential value and innovation for the mode at the state's index.
Innovation innovation(const ObserverSetup& s, const ObserverState& st, const MeasurementSet& m,
                      const std::optional<Rotation>& attitude_source);

/// Potential value for every index (hybrid modes; singleton otherwise).
std::vector<double> phi_values(const ObserverSetup& s, const ObserverState& st,
                               const MeasurementSet& m,
                               const std::optional<Rotation>& attitude_source);

struct Derivatives {
  Mat3 rhat_dot;
  Vec3 bhat_dot;
};
/// Flow-map right-hand side at the current state.
Derivatives derivatives(const ObserverSetup& s, const ObserverState& st, const MeasurementSet& m,
                        const std::optional<Rotation>& attitude_source);

struct SwitchDecision {
  bool jumped = false;
  std::size_t q = 0;           // index after the decision
  double phi_before = 0.0;
  double phi_after = 0.0;
  std::vector<double> phi;     // all indices
};
/// Hysteresis switch evaluated at the step boundary; does not mutate.
SwitchDecision switch_phase(const ObserverSetup& s, const ObserverState& st,
                            const MeasurementSet& m,
                            const std::optional<Rotation>& attitude_source);

struct StepResult {
  ObserverState state;
  bool jumped = false;
  double phi_drop = 0.0;       // potential decrease across the jump
  Innovation inn;              // innovation used for the flow segment
  double orth_error = 0.0;     // estimate drift before any renormalization
  bool renormalized = false;
};

/// One hybrid step: at most one jump at the boundary (the argmin lands in
/// the interior of the flow set, so repeated same-instant jumps cannot
/// occur), then one geometric flow step: rhat exp(hat(kappa dt)) and a
/// forward-Euler bias update kept inside the projection ball.
StepResult step(const ObserverSetup& s, const ObserverState& st, const MeasurementSet& m,
                double dt, const std::optional<Rotation>& attitude_source);

/// Diagnostic energy: phi + |b_true - bhat|^2 / gamma_i (the bias term is
/// dropped when adaptation is off). Needs the true bias, so simulation
/// only.
double lyapunov_l0(const ObserverSetup& s, const ObserverState& st, const MeasurementSet& m,
                   const std::optional<Rotation>& attitude_source, const Vec3& true_bias);

}  // namespace attkit
