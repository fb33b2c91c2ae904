#pragma once

#include "towsim/dynamics.hpp"

namespace towsim {

// Smooth, bounded pitch command: theta_max * tanh(raw / scale). Odd in raw,
// |result| < theta_max, slope theta_max/scale at the origin.
double smooth_pitch_command(double raw, double theta_max, double scale);

// First-order-filtered finite difference of a sampled signal. Returns zero
// at the priming sample. Two in cascade give a usable second derivative of
// a command signal.
class FilteredDifferentiator {
 public:
  explicit FilteredDifferentiator(double time_constant);

  // Feeds one sample, returns the filtered derivative estimate.
  double update(double input, double dt);
  double value() const { return value_; }
  void reset();

 private:
  double tau_;
  double prev_ = 0.0;
  double value_ = 0.0;
  bool primed_ = false;
};

// PD + feedforward law around the UAV pitch dynamics J_u theta_ddot = u2:
// u2 = J_u (-kp e - kd e_dot + cmd_accel), kp = 1 + k1 k2, kd = k1 + k2.
double attitude_torque(double pitch_error, double pitch_rate_error,
                       double pitch_cmd_accel, double kp, double kd,
                       double uav_inertia);

// Stateful inner loop: differentiates the pitch command twice through
// filtered finite differences and applies the law above.
class InnerAttitudeLoop {
 public:
  InnerAttitudeLoop(double k1, double k2, double uav_inertia,
                    double derivative_tau);

  double torque(const SystemState& state, double pitch_cmd, double dt);
  void reset();

  double kp() const { return 1.0 + k1_ * k2_; }
  double kd() const { return k1_ + k2_; }

 private:
  double k1_;
  double k2_;
  double inertia_;
  FilteredDifferentiator cmd_rate_;
  FilteredDifferentiator cmd_accel_;
};

}  // namespace towsim
