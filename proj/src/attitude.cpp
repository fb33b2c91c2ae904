#include "towsim/attitude.hpp"

#include <cmath>
#include <stdexcept>

namespace towsim {

double smooth_pitch_command(double raw, double theta_max, double scale) {
  if (!(theta_max > 0.0) || !(theta_max < M_PI / 2.0)) {
    throw std::invalid_argument("pitch limit must lie in (0, pi/2)");
  }
  if (!(scale > 0.0)) {
    throw std::invalid_argument("pitch command scale must be > 0");
  }
  return theta_max * std::tanh(raw / scale);
}

FilteredDifferentiator::FilteredDifferentiator(double time_constant)
    : tau_(time_constant) {
  if (!(tau_ > 0.0)) {
    throw std::invalid_argument("derivative filter time constant must be > 0");
  }
}

double FilteredDifferentiator::update(double input, double dt) {
  if (!primed_) {
    prev_ = input;
    primed_ = true;
    value_ = 0.0;
    return value_;
  }
  const double raw = (input - prev_) / dt;
  prev_ = input;
  const double decay = std::exp(-dt / tau_);
  value_ = decay * value_ + (1.0 - decay) * raw;
  return value_;
}

void FilteredDifferentiator::reset() {
  prev_ = 0.0;
  value_ = 0.0;
  primed_ = false;
}

double attitude_torque(double pitch_error, double pitch_rate_error,
                       double pitch_cmd_accel, double kp, double kd,
                       double uav_inertia) {
  return uav_inertia *
         (-kp * pitch_error - kd * pitch_rate_error + pitch_cmd_accel);
}

InnerAttitudeLoop::InnerAttitudeLoop(double k1, double k2, double uav_inertia,
                                     double derivative_tau)
    : k1_(k1), k2_(k2), inertia_(uav_inertia),
      cmd_rate_(derivative_tau), cmd_accel_(derivative_tau) {
  if (!(k1 > 0.0) || !(k2 > 0.0)) {
    throw std::invalid_argument("attitude gains must be > 0");
  }
}

double InnerAttitudeLoop::torque(const SystemState& state, double pitch_cmd,
                                 double dt) {
  const double cmd_rate = cmd_rate_.update(pitch_cmd, dt);
  const double cmd_accel = cmd_accel_.update(cmd_rate, dt);
  const double e = state.theta_u - pitch_cmd;
  const double e_dot = state.theta_u_dot - cmd_rate;
  return attitude_torque(e, e_dot, cmd_accel, kp(), kd(), inertia_);
}

void InnerAttitudeLoop::reset() {
  cmd_rate_.reset();
  cmd_accel_.reset();
}

}  // namespace towsim
