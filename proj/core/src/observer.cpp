#include "attkit/observer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace attkit {

const char* to_string(ObserverMode m) {
  switch (m) {
    case ObserverMode::Hybrid1: return "hybrid1";
    case ObserverMode::Hybrid2: return "hybrid2";
    case ObserverMode::Hybrid3: return "hybrid3";
    case ObserverMode::Hybrid4: return "hybrid4";
    case ObserverMode::Smooth1: return "smooth1";
    case ObserverMode::Smooth2: return "smooth2";
  }
  return "?";
}

std::optional<ObserverMode> parse_observer_mode(const std::string& s) {
  if (s == "hybrid1") return ObserverMode::Hybrid1;
  if (s == "hybrid2") return ObserverMode::Hybrid2;
  if (s == "hybrid3") return ObserverMode::Hybrid3;
  if (s == "hybrid4") return ObserverMode::Hybrid4;
  if (s == "smooth1") return ObserverMode::Smooth1;
  if (s == "smooth2") return ObserverMode::Smooth2;
  return std::nullopt;
}

void Gains::validate() const {
  if (!(gamma_p > 0.0)) throw std::invalid_argument("Gains: gamma_p must be > 0");
  if (gamma_i < 0.0) throw std::invalid_argument("Gains: gamma_i must be >= 0");
  if (bias_bound && !(*bias_bound > 0.0))
    throw std::invalid_argument("Gains: bias_bound must be > 0 when set");
}

void MeasurementSet::validate() const {
  if (body.size() != inertial.size() || body.size() != rho.size())
    throw std::invalid_argument("MeasurementSet: size mismatch");
  if (body.size() < 3) throw std::invalid_argument("MeasurementSet: need n >= 3 vector pairs");
  for (double r : rho)
    if (!(r > 0.0)) throw std::invalid_argument("MeasurementSet: weights must be positive");
}

ObserverSetup make_observer_setup(ObserverMode mode, std::span<const Vec3> inertial,
                                  std::span<const double> rho, double k, double delta_fraction,
                                  const Gains& gains) {
  gains.validate();
  const bool isotropic = mode == ObserverMode::Hybrid1 || mode == ObserverMode::Hybrid2 ||
                         mode == ObserverMode::Smooth1;
  WeightMatrix weight =
      isotropic ? WeightMatrix::identity() : WeightMatrix::from_vectors(inertial, rho);
  std::optional<HybridConfig> config;
  if (is_hybrid(mode)) config = make_config(mode_design(mode), weight, k, delta_fraction);
  return ObserverSetup{mode, std::move(weight), std::move(config), gains};
}

Vec3 proj_ball(const Vec3& mu, const Vec3& bhat, double bbar) {
  if (!(bbar > 0.0)) throw std::invalid_argument("proj_ball: bound must be > 0");
  // Active on the boundary for outward updates, so the closed ball stays
  // forward invariant.
  if (bhat.norm() < bbar || bhat.dot(mu) <= 0.0) return mu;
  return mu - bhat * (bhat.dot(mu) / bhat.squared_norm());
}

Rotation reconstruct_attitude(const MeasurementSet& m) {
  m.validate();
  Mat3 acc = Mat3::zero();
  for (std::size_t i = 0; i < m.body.size(); ++i)
    acc = acc + m.rho[i] * Mat3::outer(m.inertial[i], m.body[i]);
  return Rotation::from_matrix_unchecked(nearest_rotation_matrix(acc));
}

ExplicitTerms explicit_terms(const WeightMatrix& w, double k, const Vec3& nu,
                             const Rotation& rhat, const MeasurementSet& m) {
  const double scale = 1.0 / (8.0 * w.lambda_max_bar());
  ExplicitTerms et;
  Vec3 cross_sum = Vec3::zero();
  double mismatch = 0.0;
  for (std::size_t i = 0; i < m.body.size(); ++i) {
    const Vec3 pred = rhat.transposed() * m.inertial[i];
    mismatch += m.rho[i] * (m.body[i] - pred).squared_norm();
    cross_sum += m.rho[i] * m.body[i].cross(pred);
  }
  et.vartheta = mismatch * scale;

  const double kv = clamped_warp_arg(k * et.vartheta);
  et.r_bar = angle_axis_to_rot(2.0 * std::asin(kv), nu).matrix();

  Vec3 warped_cross = Vec3::zero();
  double warped_mismatch = 0.0;
  for (std::size_t i = 0; i < m.body.size(); ++i) {
    const Vec3 pred = rhat.transposed() * (et.r_bar * m.inertial[i]);
    warped_mismatch += m.rho[i] * (m.body[i] - pred).squared_norm();
    warped_cross += m.rho[i] * m.body[i].cross(pred);
  }
  et.phi_bar = warped_mismatch * scale;

  // The rank-one correction is the warp transport written in measurements;
  // its denominator carries the warp angle's k so that this path stays
  // identical to the warped-potential one (the oracle tests pin this down).
  const double denom = 2.0 * w.lambda_max_bar() * std::sqrt(1.0 - kv * kv);
  et.theta_bar = Mat3::identity() + Mat3::outer(rhat.matrix() * (cross_sum * (k / denom)), nu);
  et.beta_bar =
      rhat.transposed() * (et.theta_bar * (rhat.matrix() * (warped_cross * scale)));
  return et;
}

Vec3 beta_from_attitude(const HybridConfig& c, const Rotation& rhat, const Rotation& rtilde,
                        std::size_t q) {
  const Mat3 grad = grad_phi_composite(c.warp, c.kind, rtilde, q);
  return rhat.transposed() * vee(rtilde.matrix().transposed() * grad);
}

namespace {

Rotation attitude_error_from(const Rotation& source, const Rotation& rhat) {
  return source * rhat.transposed();
}

const Rotation& require_attitude(const std::optional<Rotation>& att, ObserverMode mode) {
  if (!att)
    throw std::invalid_argument(std::string("observer: mode ") + to_string(mode) +
                                " requires an attitude source");
  return *att;
}

// Smooth mismatch value and weighted cross sum shared by the
// measurement-driven modes.
struct VectorErrors {
  double u = 0.0;  // sum rho_i |b_i - rhat^T a_i|^2 / (8 lambda_max)
  Vec3 cross_sum = Vec3::zero();
};
VectorErrors vector_errors(const WeightMatrix& w, const Rotation& rhat,
                           const MeasurementSet& m) {
  VectorErrors ve;
  for (std::size_t i = 0; i < m.body.size(); ++i) {
    const Vec3 pred = rhat.transposed() * m.inertial[i];
    ve.u += m.rho[i] * (m.body[i] - pred).squared_norm();
    ve.cross_sum += m.rho[i] * m.body[i].cross(pred);
  }
  ve.u /= 8.0 * w.lambda_max_bar();
  return ve;
}

double v_of_u(double u) { return 2.0 * (1.0 - std::sqrt(std::max(1.0 - u, 0.0))); }

}  // namespace

Innovation innovation(const ObserverSetup& s, const ObserverState& st, const MeasurementSet& m,
                      const std::optional<Rotation>& attitude_source) {
  m.validate();
  switch (s.mode) {
    case ObserverMode::Hybrid1:
    case ObserverMode::Hybrid2: {
      const Rotation rtilde =
          attitude_error_from(require_attitude(attitude_source, s.mode), st.rhat);
      const HybridConfig& c = *s.config;
      return {phi_composite(c.warp, c.kind, rtilde, st.q),
              beta_from_attitude(c, st.rhat, rtilde, st.q)};
    }
    case ObserverMode::Hybrid3:
    case ObserverMode::Hybrid4: {
      const HybridConfig& c = *s.config;
      const ExplicitTerms et =
          explicit_terms(c.warp.weight, c.warp.k, c.warp.nu(st.q), st.rhat, m);
      if (s.mode == ObserverMode::Hybrid3) return {et.phi_bar, et.beta_bar};
      if (et.phi_bar >= 1.0 - kSingularityGuard)
        throw SingularityFault("innovation: non-smooth direct observer at the singular set");
      return {v_of_u(et.phi_bar), et.beta_bar * (1.0 / std::sqrt(1.0 - et.phi_bar))};
    }
    case ObserverMode::Smooth1: {
      const Rotation rtilde =
          attitude_error_from(require_attitude(attitude_source, s.mode), st.rhat);
      const Vec3 beta = st.rhat.transposed() * psi(rtilde.matrix()) * 0.25;
      return {rotation_distance(rtilde), beta};
    }
    case ObserverMode::Smooth2: {
      const VectorErrors ve = vector_errors(s.weight, st.rhat, m);
      return {ve.u, ve.cross_sum * (1.0 / (8.0 * s.weight.lambda_max_bar()))};
    }
  }
  throw std::logic_error("innovation: unknown mode");
}

std::vector<double> phi_values(const ObserverSetup& s, const ObserverState& st,
                               const MeasurementSet& m,
                               const std::optional<Rotation>& attitude_source) {
  m.validate();
  if (!is_hybrid(s.mode)) return {innovation(s, st, m, attitude_source).phi};
  const HybridConfig& c = *s.config;
  if (s.mode == ObserverMode::Hybrid1 || s.mode == ObserverMode::Hybrid2) {
    const Rotation rtilde =
        attitude_error_from(require_attitude(attitude_source, s.mode), st.rhat);
    return phi_all(c, rtilde);
  }
  // Direct-measurement path: the warp angle (via vartheta) is shared across
  // indices, the perturbed mismatch is not.
  const WeightMatrix& w = c.warp.weight;
  const double scale = 1.0 / (8.0 * w.lambda_max_bar());
  double mismatch = 0.0;
  for (std::size_t i = 0; i < m.body.size(); ++i) {
    const Vec3 pred = st.rhat.transposed() * m.inertial[i];
    mismatch += m.rho[i] * (m.body[i] - pred).squared_norm();
  }
  const double vartheta = mismatch * scale;
  const double angle = 2.0 * std::asin(clamped_warp_arg(c.warp.k * vartheta));
  std::vector<double> out(c.q_count());
  for (std::size_t q = 0; q < c.q_count(); ++q) {
    const Mat3 rbar = angle_axis_to_rot(angle, c.warp.nu(q)).matrix();
    double warped = 0.0;
    for (std::size_t i = 0; i < m.body.size(); ++i) {
      const Vec3 pred = st.rhat.transposed() * (rbar * m.inertial[i]);
      warped += m.rho[i] * (m.body[i] - pred).squared_norm();
    }
    out[q] = warped * scale;
    if (c.kind == PotentialKind::V) out[q] = v_of_u(out[q]);
  }
  return out;
}

Derivatives derivatives(const ObserverSetup& s, const ObserverState& st, const MeasurementSet& m,
                        const std::optional<Rotation>& attitude_source) {
  const Innovation inn = innovation(s, st, m, attitude_source);
  const Vec3 kappa = m.omega_y - st.bhat + s.gains.gamma_p * inn.beta;
  Derivatives d;
  d.rhat_dot = st.rhat.matrix() * hat(kappa);
  const Vec3 mu = -s.gains.gamma_i * inn.beta;
  d.bhat_dot = s.gains.bias_bound ? proj_ball(mu, st.bhat, *s.gains.bias_bound) : mu;
  return d;
}

SwitchDecision switch_phase(const ObserverSetup& s, const ObserverState& st,
                            const MeasurementSet& m,
                            const std::optional<Rotation>& attitude_source) {
  SwitchDecision d;
  d.q = st.q;
  d.phi = phi_values(s, st, m, attitude_source);
  d.phi_before = d.phi[st.q];
  d.phi_after = d.phi_before;
  if (!is_hybrid(s.mode)) return d;
  const double delta = s.config->delta;
  if (in_jump_values(d.phi, st.q, delta)) {
    d.jumped = true;
    d.q = argmin_index(d.phi);
    d.phi_after = d.phi[d.q];
  }
  return d;
}

StepResult step(const ObserverSetup& s, const ObserverState& st, const MeasurementSet& m,
                double dt, const std::optional<Rotation>& attitude_source) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
  StepResult r;
  r.state = st;

  const SwitchDecision sw = switch_phase(s, st, m, attitude_source);
  if (sw.jumped) {
    r.jumped = true;
    r.phi_drop = sw.phi_before - sw.phi_after;
    r.state.q = sw.q;
    r.state.jumps += 1;
  }

  r.inn = innovation(s, r.state, m, attitude_source);
  const Vec3 kappa = m.omega_y - r.state.bhat + s.gains.gamma_p * r.inn.beta;
  Rotation rhat_next = r.state.rhat * exp_so3(kappa * dt);

  const Vec3 mu = -s.gains.gamma_i * r.inn.beta;
  const Vec3 bdot =
      s.gains.bias_bound ? proj_ball(mu, r.state.bhat, *s.gains.bias_bound) : mu;
  Vec3 bhat_next = r.state.bhat + bdot * dt;
  if (s.gains.bias_bound) {
    // The continuous law keeps the ball forward invariant; the Euler step
    // can overshoot by O(dt), so retract onto the ball.
    const double n = bhat_next.norm();
    if (n > *s.gains.bias_bound) bhat_next *= *s.gains.bias_bound / n;
  }

  r.orth_error = rhat_next.orthonormality_error();
  if (r.orth_error > 1e-9) {
    rhat_next = orthonormalize(rhat_next.matrix());
    r.renormalized = true;
  }

  r.state.rhat = rhat_next;
  r.state.bhat = bhat_next;
  r.state.t += dt;
  return r;
}

double lyapunov_l0(const ObserverSetup& s, const ObserverState& st, const MeasurementSet& m,
                   const std::optional<Rotation>& attitude_source, const Vec3& true_bias) {
  const double phi = innovation(s, st, m, attitude_source).phi;
  if (s.gains.gamma_i > 0.0)
    return phi + (true_bias - st.bhat).squared_norm() / s.gains.gamma_i;
  return phi;
}

}  // namespace attkit
