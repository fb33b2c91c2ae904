#pragma once

#include <cmath>

#include "towsim/attitude.hpp"
#include "towsim/controller.hpp"
#include "towsim/fsvc.hpp"  // VelocityReferenceFilter

namespace towsim {

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
};

// Parallel-form PID with a filtered derivative on the error. The integral is
// advanced separately so the owner can freeze it under output saturation.
class PidChannel {
 public:
  PidChannel(const PidGains& gains, double derivative_tau);

  // Output with the current integral state; feeds the derivative filter.
  double update(double error, double dt);
  void integrate(double error, double dt);
  void reset();

  double integral() const { return integral_; }
  const PidGains& gains() const { return gains_; }

 private:
  PidGains gains_;
  double integral_ = 0.0;
  FilteredDifferentiator derivative_;
};

struct PidConfig {
  PidGains velocity{7.0, 1.2, 5.0};   // on e = Vbar - V (buoy surge)
  PidGains elevation{3.0, 1.0, 2.0};  // on e = zbar_u - z_u (UAV height)
  double k_theta1 = 2.0;              // shared inner attitude loop
  double k_theta2 = 3.4;
  double pitch_limit = M_PI / 4.0;
  double pitch_cmd_scale = 0.0;  // <= 0 means pitch_limit
  double thrust_limit = 0.0;     // <= 0 means 4 m_u g
  double ref_filter_tau = 2.0;
  double derivative_tau = 0.05;
};

// Cartesian benchmark: a velocity channel and an elevation channel produce
// desired accelerations that are mapped to thrust magnitude and pitch
// command through the planar quadrotor geometry.
class PidController : public Controller {
 public:
  PidController(const PidConfig& config, const RigidBodyParams& body);

  ControlCommand update(const SystemState& state, const Accelerations& prev,
                        const EnvSample& env, const References& refs,
                        double dt) override;
  void reset() override;
  const char* name() const override { return "pid"; }
  double shaped_surge_reference() const override { return v_ref_.value(); }

  const PidConfig& config() const { return config_; }

 private:
  PidConfig config_;
  RigidBodyParams body_;
  double thrust_limit_;
  double pitch_cmd_scale_;
  VelocityReferenceFilter v_ref_;
  PidChannel velocity_;
  PidChannel elevation_;
  InnerAttitudeLoop inner_;
};

}  // namespace towsim
