#include "towsim/fsvc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace towsim {

void FsvcGains::validate() const {
  if (!(k_alpha1 > 0.0) || !(k_alpha2 > 0.0) || !(k_v > 0.0) ||
      !(gamma_alpha > 0.0) || !(gamma_v > 0.0)) {
    throw std::invalid_argument("all backstepping gain primitives must be > 0");
  }
}

VelocityReferenceFilter::VelocityReferenceFilter(double tau) : tau_(tau) {
  if (!(tau_ > 0.0)) {
    throw std::invalid_argument("reference filter time constant must be > 0");
  }
}

void VelocityReferenceFilter::update(double setpoint, double dt) {
  // Exact solution over [0, dt] for constant input u:
  //   f1(dt) = u + (f1 - u) e^{-dt/tau}
  //   f2(dt) = u + [(f2 - u) + (f1 - u) dt/tau] e^{-dt/tau}
  const double decay = std::exp(-dt / tau_);
  const double d1 = inner_ - setpoint;
  const double d2 = outer_ - setpoint;
  inner_ = setpoint + d1 * decay;
  outer_ = setpoint + (d2 + d1 * dt / tau_) * decay;
}

void VelocityReferenceFilter::reset() {
  inner_ = 0.0;
  outer_ = 0.0;
}

double corrected_elevation_angle(double uav_altitude, double z_b,
                                 double cable_length) {
  const double ratio = (uav_altitude - z_b) / cable_length;
  if (std::abs(ratio) > 1.0) {
    throw SimulationError(
        "commanded UAV height unreachable with a taut cable (|zbar_u - z_b| > l)");
  }
  return std::asin(ratio);
}

FsvcOuterOutputs fsvc_outer_law(const FsvcOuterInputs& in,
                                const FsvcGains& gains, double uav_mass,
                                double cable_length, double gravity) {
  const double sa = std::sin(in.alpha);
  const double ca = std::cos(in.alpha);
  const double rate2 = in.alpha_dot * in.alpha_dot;

  // Nonlinear and gravitational terms of each channel.
  const double h_t =
      (cable_length * rate2 - in.z_b_ddot * sa - gravity * sa) / ca;
  const double h_alpha =
      (in.v_dot * sa - in.z_b_ddot * ca - gravity * ca) / cable_length;

  FsvcOuterOutputs out;
  out.radial = in.tension_estimate +
               uav_mass * ca *
                   (-h_t + in.v_ref_dot - gains.kp_v() * in.e_v -
                    gains.ki_v() * in.e_v_int);
  out.tangential =
      uav_mass * cable_length *
      (-h_alpha + in.alpha_ref_ddot - gains.kp_alpha() * in.e_alpha -
       gains.kd_alpha() * in.e_alpha_dot - gains.ki_alpha() * in.e_alpha_int);
  out.thrust = std::hypot(out.radial, out.tangential);
  out.pitch_cmd_raw =
      M_PI / 2.0 - in.alpha - std::atan2(out.tangential, out.radial);
  return out;
}

FsvcController::FsvcController(const FsvcConfig& config,
                               const RigidBodyParams& body)
    : config_(config),
      body_(body),
      thrust_limit_(config.thrust_limit > 0.0
                        ? config.thrust_limit
                        : 4.0 * body.uav_mass * body.gravity),
      pitch_cmd_scale_(config.pitch_cmd_scale > 0.0 ? config.pitch_cmd_scale
                                                    : config.pitch_limit),
      v_ref_(config.ref_filter_tau),
      alpha_ref_rate_(config.derivative_tau),
      alpha_ref_accel_(config.derivative_tau),
      inner_(config.k_theta1, config.k_theta2, body.uav_inertia,
             config.derivative_tau) {
  config_.gains.validate();
  if (!(config_.tension_filter_tau > 0.0)) {
    throw std::invalid_argument("tension filter time constant must be > 0");
  }
}

ControlCommand FsvcController::update(const SystemState& state,
                                      const Accelerations& prev,
                                      const EnvSample& env,
                                      const References& refs, double dt) {
  v_ref_.update(refs.surge_setpoint, dt);
  const double alpha_ref =
      corrected_elevation_angle(refs.uav_altitude, state.z_b,
                                body_.cable_length);
  const double alpha_ref_dot = alpha_ref_rate_.update(alpha_ref, dt);
  const double alpha_ref_ddot = alpha_ref_accel_.update(alpha_ref_dot, dt);

  if (std::cos(state.alpha) <= config_.cos_alpha_min) {
    // Near-vertical cable: the polar channels degenerate; hold the previous
    // command and flag the sample.
    ControlCommand held = last_cmd_;
    held.held = true;
    last_cmd_ = held;
    return held;
  }

  // Surge-balance tension estimate from the previous period's accelerations,
  // clamped non-negative, then smoothed: feeding the raw delayed value back
  // into the radial component closes a near-unity-gain loop through the
  // cable and limit-cycles.
  const double tension_raw = std::max(
      0.0, tension_from_surge_balance(env, prev.x_b, prev.z_b, state.alpha));
  if (!tension_primed_) {
    tension_filtered_ = tension_raw;
    tension_primed_ = true;
  } else {
    tension_filtered_ +=
        (tension_raw - tension_filtered_) *
        (1.0 - std::exp(-dt / config_.tension_filter_tau));
  }

  FsvcOuterInputs in;
  in.alpha = state.alpha;
  in.alpha_dot = state.alpha_dot;
  in.tension_estimate = tension_filtered_;
  in.v_dot = prev.x_b;
  in.z_b_ddot = prev.z_b;
  in.v_ref_dot = v_ref_.derivative();
  in.alpha_ref_ddot = alpha_ref_ddot;
  in.e_v = state.v - v_ref_.value();
  in.e_alpha = state.alpha - alpha_ref;
  in.e_alpha_dot = state.alpha_dot - alpha_ref_dot;
  in.e_v_int = e_v_int_;
  in.e_alpha_int = e_alpha_int_;

  const FsvcOuterOutputs outer = fsvc_outer_law(
      in, config_.gains, body_.uav_mass, body_.cable_length, body_.gravity);

  ControlCommand cmd;
  cmd.radial = outer.radial;
  cmd.tangential = outer.tangential;
  cmd.thrust = std::clamp(outer.thrust, 0.0, thrust_limit_);
  cmd.pitch_cmd_raw = outer.pitch_cmd_raw;
  cmd.pitch_cmd = smooth_pitch_command(outer.pitch_cmd_raw,
                                       config_.pitch_limit, pitch_cmd_scale_);
  cmd.tension_estimate = in.tension_estimate;

  const bool saturated = outer.thrust > thrust_limit_;
  if (!saturated) {
    // Integrator/adaptation states advance only while the thrust command is
    // authoritative, preserving delta_hat = gamma * integral.
    e_v_int_ += in.e_v * dt;
    e_alpha_int_ +=
        (in.e_alpha + in.e_alpha_dot / config_.gains.k_alpha1) * dt;
  }

  cmd.pitch_torque = inner_.torque(state, cmd.pitch_cmd, dt);

  debug_.v_ref = v_ref_.value();
  debug_.v_ref_dot = in.v_ref_dot;
  debug_.alpha_ref = alpha_ref;
  debug_.alpha_ref_dot = alpha_ref_dot;
  debug_.alpha_ref_ddot = alpha_ref_ddot;
  debug_.e_v = in.e_v;
  debug_.e_alpha = in.e_alpha;
  debug_.e_alpha_dot = in.e_alpha_dot;
  debug_.e_v_int = e_v_int_;
  debug_.e_alpha_int = e_alpha_int_;
  debug_.delta_v_hat = config_.gains.gamma_v * e_v_int_;
  debug_.delta_alpha_hat =
      config_.gains.gamma_alpha * config_.gains.k_alpha1 * e_alpha_int_;
  debug_.saturated = saturated;

  last_cmd_ = cmd;
  return cmd;
}

void FsvcController::reset() {
  v_ref_.reset();
  alpha_ref_rate_.reset();
  alpha_ref_accel_.reset();
  inner_.reset();
  e_v_int_ = 0.0;
  e_alpha_int_ = 0.0;
  tension_filtered_ = 0.0;
  tension_primed_ = false;
  last_cmd_ = ControlCommand{};
  debug_ = FsvcDebug{};
}

}  // namespace towsim
