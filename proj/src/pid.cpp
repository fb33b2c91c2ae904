#include "towsim/pid.hpp"

#include <algorithm>
#include <cmath>

namespace towsim {

PidChannel::PidChannel(const PidGains& gains, double derivative_tau)
    : gains_(gains), derivative_(derivative_tau) {}

double PidChannel::update(double error, double dt) {
  const double error_rate = derivative_.update(error, dt);
  return gains_.kp * error + gains_.ki * integral_ + gains_.kd * error_rate;
}

void PidChannel::integrate(double error, double dt) {
  integral_ += error * dt;
}

void PidChannel::reset() {
  integral_ = 0.0;
  derivative_.reset();
}

PidController::PidController(const PidConfig& config,
                             const RigidBodyParams& body)
    : config_(config),
      body_(body),
      thrust_limit_(config.thrust_limit > 0.0
                        ? config.thrust_limit
                        : 4.0 * body.uav_mass * body.gravity),
      pitch_cmd_scale_(config.pitch_cmd_scale > 0.0 ? config.pitch_cmd_scale
                                                    : config.pitch_limit),
      v_ref_(config.ref_filter_tau),
      velocity_(config.velocity, config.derivative_tau),
      elevation_(config.elevation, config.derivative_tau),
      inner_(config.k_theta1, config.k_theta2, body.uav_inertia,
             config.derivative_tau) {}

ControlCommand PidController::update(const SystemState& state,
                                     const Accelerations& /*prev*/,
                                     const EnvSample& /*env*/,
                                     const References& refs, double dt) {
  v_ref_.update(refs.surge_setpoint, dt);
  const double e_v = v_ref_.value() - state.v;
  const double e_z = refs.uav_altitude - state.uav_z(body_.cable_length);

  const double accel_x = velocity_.update(e_v, dt);
  const double accel_z = elevation_.update(e_z, dt);

  const double g = body_.gravity;
  ControlCommand cmd;
  const double thrust_raw =
      body_.uav_mass * std::hypot(accel_x, g + accel_z);
  cmd.thrust = std::clamp(thrust_raw, 0.0, thrust_limit_);
  if (thrust_raw <= thrust_limit_) {
    velocity_.integrate(e_v, dt);
    elevation_.integrate(e_z, dt);
  }
  cmd.pitch_cmd_raw = std::atan2(accel_x, g + accel_z);
  cmd.pitch_cmd = smooth_pitch_command(cmd.pitch_cmd_raw, config_.pitch_limit,
                                       pitch_cmd_scale_);
  // Radial/tangential decomposition of the commanded thrust, for logging.
  cmd.radial = cmd.thrust * std::sin(state.alpha + cmd.pitch_cmd);
  cmd.tangential = cmd.thrust * std::cos(state.alpha + cmd.pitch_cmd);
  cmd.tension_estimate = 0.0;

  cmd.pitch_torque = inner_.torque(state, cmd.pitch_cmd, dt);
  return cmd;
}

void PidController::reset() {
  v_ref_.reset();
  velocity_.reset();
  elevation_.reset();
  inner_.reset();
}

}  // namespace towsim
