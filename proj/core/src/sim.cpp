#include "attkit/sim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace attkit {

VectorProfile VectorProfile::constant(const Vec3& v) {
  VectorProfile p;
  p.type = Type::Constant;
  p.amplitude = v;
  return p;
}

VectorProfile VectorProfile::sinusoid(const Vec3& amp, const Vec3& freq, const Vec3& phase) {
  VectorProfile p;
  p.type = Type::Sinusoid;
  p.amplitude = amp;
  p.frequency = freq;
  p.phase = phase;
  return p;
}

VectorProfile VectorProfile::scaled_cosine(const Vec3& base, double depth, double rate) {
  VectorProfile p;
  p.type = Type::ScaledCosine;
  p.amplitude = base;
  p.depth = depth;
  p.rate = rate;
  return p;
}

Vec3 VectorProfile::value(double t) const {
  switch (type) {
    case Type::Zero: return Vec3::zero();
    case Type::Constant: return amplitude;
    case Type::Sinusoid:
      return {amplitude.x * std::sin(frequency.x * t + phase.x),
              amplitude.y * std::sin(frequency.y * t + phase.y),
              amplitude.z * std::sin(frequency.z * t + phase.z)};
    case Type::ScaledCosine: return amplitude * (1.0 + depth * std::cos(rate * t));
  }
  return Vec3::zero();
}

void ScenarioConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("ScenarioConfig: dt must be > 0");
  if (!(t_end > dt)) throw std::invalid_argument("ScenarioConfig: t_end must exceed dt");
  if (record_stride < 1) throw std::invalid_argument("ScenarioConfig: record_stride must be >= 1");
  if (modes.empty()) throw std::invalid_argument("ScenarioConfig: no observer modes");
  if (inertial.size() < 3 || inertial.size() != rho.size())
    throw std::invalid_argument("ScenarioConfig: need n >= 3 inertial vectors with weights");
  gains.validate();
  (void)Rotation::from_matrix(r0_truth);
  (void)Rotation::from_matrix(r0_hat);
}

ScenarioConfig default_example(int which) {
  if (which != 1 && which != 2) throw std::invalid_argument("default_example: which must be 1 or 2");
  constexpr double pi = 3.14159265358979323846;
  ScenarioConfig c;
  c.name = which == 1 ? "example1" : "example2";
  c.omega_profile = VectorProfile::sinusoid({0.5, 0.7, 1.0}, {0.1, 0.2, 0.3}, {0.0, pi, pi / 3.0});
  c.bias_profile = VectorProfile::scaled_cosine({0.003, -0.005, 0.01}, 0.1, 0.1);
  const Vec3 a1 = Vec3{1.0, -1.0, 1.0}.normalized();
  const Vec3 a2 = Vec3::unit_z();
  const Vec3 a3 = a1.cross(a2);  // completes the pair; not unit norm by design
  c.inertial = {a1, a2, a3};
  c.rho = which == 2 ? std::vector<double>{1.0, 3.0, 1.0} : std::vector<double>{1.0, 1.0, 1.0};
  c.gains = Gains{5.0, 10.0, 0.1};
  c.k = 0.95 / std::sqrt(5.0);
  c.delta_fraction = 0.8;
  c.r0_truth = Mat3::identity();
  // Initial error: a half turn about the first axis.
  c.r0_hat = angle_axis_to_rot(pi, Vec3::unit_x()).matrix();
  c.bhat0 = Vec3::zero();
  c.q0 = 0;
  c.dt = 1e-3;
  c.t_end = 60.0;
  c.record_stride = 10;
  c.modes = which == 1
                ? std::vector<ObserverMode>{ObserverMode::Hybrid1, ObserverMode::Hybrid2,
                                            ObserverMode::Smooth1}
                : std::vector<ObserverMode>{ObserverMode::Hybrid3, ObserverMode::Hybrid4,
                                            ObserverMode::Smooth2};
  return c;
}

namespace {

constexpr double kSettlingThreshold = 1e-3;
constexpr double kConvergedThreshold = 1e-6;

struct ModeRuntime {
  ObserverSetup setup;
  ObserverState state;
  double l0_after_boundary = 0.0;  // L0 once the boundary's jump (if any) settled
  bool have_prev = false;
  long last_above_settling = -1;   // last step index with attitude_err >= threshold
  bool converged_seen = false;
};

}  // namespace

RunResult run(const ScenarioConfig& config) {
  config.validate();
  RunResult out;
  out.config = config;
  const std::uint64_t clamps_at_start = warp_clamp_count();

  MeasurementSet meas;
  meas.inertial = config.inertial;
  meas.rho = config.rho;
  meas.body.resize(config.inertial.size());

  const bool any_reconstruction = [&] {
    for (ObserverMode m : config.modes)
      if (needs_attitude_source(m)) return true;
    return false;
  }();

  std::vector<ModeRuntime> rts;
  rts.reserve(config.modes.size());
  for (ObserverMode mode : config.modes) {
    ModeRuntime rt{make_observer_setup(mode, config.inertial, config.rho, config.k,
                                       config.delta_fraction, config.gains),
                   ObserverState{}, 0.0, false, -1, false};
    rt.state.rhat = Rotation::from_matrix(config.r0_hat);
    rt.state.bhat = config.bhat0;
    rt.state.q = is_hybrid(mode) ? config.q0 : 0;
    if (rt.setup.config && rt.state.q >= rt.setup.config->q_count())
      throw std::invalid_argument("run: q0 outside the index set");
    rts.push_back(std::move(rt));
  }
  out.stats.assign(config.modes.size(), ModeStats{});
  for (ModeStats& st : out.stats)
    st.min_jump_drop = std::numeric_limits<double>::infinity();

  Rotation truth = Rotation::from_matrix(config.r0_truth);
  const long n_steps = std::llround(config.t_end / config.dt);
  std::vector<bool> jumped_in_stride(config.modes.size(), false);

  for (long n = 0; n <= n_steps; ++n) {
    const double t = static_cast<double>(n) * config.dt;
    const Vec3 omega = config.omega_profile.value(t);
    const Vec3 bias = config.bias_profile.value(t);
    meas.omega_y = omega + bias;
    for (std::size_t i = 0; i < meas.inertial.size(); ++i)
      meas.body[i] = truth.transposed() * meas.inertial[i];
    const std::optional<Rotation> att =
        any_reconstruction ? std::optional<Rotation>(reconstruct_attitude(meas)) : std::nullopt;

    const bool record_now = (n % config.record_stride == 0) || n == n_steps;
    TraceRecord row;
    row.t = t;
    if (record_now) row.modes.resize(config.modes.size());

    for (std::size_t im = 0; im < rts.size(); ++im) {
      ModeRuntime& rt = rts[im];
      ModeStats& st = out.stats[im];
      const double attitude_err = rotation_distance(truth * rt.state.rhat.transposed());
      const double bias_err = (bias - rt.state.bhat).norm();
      st.max_bhat_norm = std::max(st.max_bhat_norm, rt.state.bhat.norm());
      if (attitude_err < kConvergedThreshold) rt.converged_seen = true;
      if (attitude_err >= kSettlingThreshold) rt.last_above_settling = n;

      double phi_now;
      double l0_now;
      bool jumped_now = false;
      if (n < n_steps) {
        const StepResult res = [&] {
          try {
            return step(rt.setup, rt.state, meas, config.dt, att);
          } catch (const Fault& e) {
            // Surface the offending hybrid time and mode with the fault.
            throw Fault(std::string(e.what()) + " [scenario '" + config.name + "', mode " +
                        to_string(config.modes[im]) + ", t=" + std::to_string(t) +
                        ", j=" + std::to_string(rt.state.jumps) + "]");
          }
        }();
        phi_now = res.inn.phi;
        const double bias_term =
            config.gains.gamma_i > 0.0
                ? (bias - rt.state.bhat).squared_norm() / config.gains.gamma_i
                : 0.0;
        l0_now = phi_now + bias_term;
        const double l0_pre_jump = l0_now + res.phi_drop;
        if (rt.have_prev) {
          const double incr = l0_pre_jump - rt.l0_after_boundary;
          st.max_l0_flow_increase = std::max(st.max_l0_flow_increase, incr);
        } else {
          st.l0_initial = l0_pre_jump;
        }
        if (res.jumped) {
          jumped_now = true;
          st.jump_count += 1;
          st.min_jump_drop = std::min(st.min_jump_drop, res.phi_drop);
          if (rt.converged_seen) st.jumps_after_converged += 1;
        }
        st.max_orth_drift = std::max(st.max_orth_drift, res.orth_error);
        if (res.renormalized) st.renorm_count += 1;
        rt.l0_after_boundary = l0_now;
        rt.have_prev = true;

        if (record_now) {
          ModeTraceRecord& mr = row.modes[im];
          mr.attitude_err = attitude_err;
          mr.bias_err = bias_err;
          mr.phi = phi_now;
          mr.l0 = l0_now;
          mr.q = res.state.q;
          mr.jumps = res.state.jumps;
          mr.jumped = jumped_in_stride[im] || jumped_now;
        }
        rt.state = res.state;
      } else {
        // Final boundary: evaluate the switch and the potential without
        // integrating past t_end.
        const SwitchDecision sw = switch_phase(rt.setup, rt.state, meas, att);
        if (sw.jumped) {
          jumped_now = true;
          st.jump_count += 1;
          st.min_jump_drop = std::min(st.min_jump_drop, sw.phi_before - sw.phi_after);
          if (rt.converged_seen) st.jumps_after_converged += 1;
          rt.state.q = sw.q;
          rt.state.jumps += 1;
        }
        phi_now = sw.phi_after;
        const double bias_term =
            config.gains.gamma_i > 0.0
                ? (bias - rt.state.bhat).squared_norm() / config.gains.gamma_i
                : 0.0;
        l0_now = phi_now + bias_term;
        if (rt.have_prev) {
          const double incr = (l0_now + (sw.phi_before - sw.phi_after)) - rt.l0_after_boundary;
          st.max_l0_flow_increase = std::max(st.max_l0_flow_increase, incr);
        }
        st.final_attitude_err = attitude_err;
        st.final_bias_err = bias_err;
        if (record_now) {
          ModeTraceRecord& mr = row.modes[im];
          mr.attitude_err = attitude_err;
          mr.bias_err = bias_err;
          mr.phi = phi_now;
          mr.l0 = l0_now;
          mr.q = rt.state.q;
          mr.jumps = rt.state.jumps;
          mr.jumped = jumped_in_stride[im] || jumped_now;
        }
      }
      jumped_in_stride[im] = record_now ? false : (jumped_in_stride[im] || jumped_now);
    }

    if (record_now) out.trace.push_back(std::move(row));
    out.truth_max_orth_drift = std::max(out.truth_max_orth_drift, truth.orthonormality_error());
    if (n < n_steps) truth = truth * exp_so3(omega * config.dt);
  }

  for (std::size_t im = 0; im < rts.size(); ++im) {
    ModeStats& st = out.stats[im];
    if (rts[im].last_above_settling < 0) {
      st.settling_time = 0.0;
    } else if (rts[im].last_above_settling >= n_steps) {
      st.settling_time = std::numeric_limits<double>::infinity();
    } else {
      st.settling_time = static_cast<double>(rts[im].last_above_settling + 1) * config.dt;
    }
  }
  out.warp_clamp_events = warp_clamp_count() - clamps_at_start;
  return out;
}

Summary metrics(const RunResult& result) {
  if (result.trace.empty()) throw std::invalid_argument("metrics: empty trace");
  Summary s;
  s.scenario = result.config.name;
  s.warp_clamp_events = result.warp_clamp_events;
  for (std::size_t i = 0; i < result.config.modes.size(); ++i)
    s.modes.push_back({to_string(result.config.modes[i]), result.stats[i]});
  return s;
}

}  // namespace attkit
