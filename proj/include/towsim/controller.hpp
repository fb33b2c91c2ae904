#pragma once

#include "towsim/dynamics.hpp"

namespace towsim {

struct References {
  double surge_setpoint = 0.0;  // Vbar_0 [m/s], before reference shaping
  double uav_altitude = 0.0;    // zbar_u [m]
};

struct ControlCommand {
  double thrust = 0.0;            // u1 [N], >= 0
  double pitch_torque = 0.0;      // u2 [N m]
  double radial = 0.0;            // u_T, thrust component along the cable [N]
  double tangential = 0.0;        // u_alpha, component normal to the cable [N]
  double pitch_cmd_raw = 0.0;     // theta'_uc [rad]
  double pitch_cmd = 0.0;         // theta_uc [rad], |.| < pitch limit
  double tension_estimate = 0.0;  // That [N]; 0 where the law uses none
  bool held = false;              // outer loop reused the previous sample
};

// One outer+inner control period. `prev` carries the accelerations solved at
// the previous control sample (zeros at the first sample); `env` the
// environment measured at the current state.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual ControlCommand update(const SystemState& state,
                                const Accelerations& prev,
                                const EnvSample& env, const References& refs,
                                double dt) = 0;
  virtual void reset() = 0;
  virtual const char* name() const = 0;
  // Shaped velocity reference Vbar the controller currently tracks.
  virtual double shaped_surge_reference() const = 0;
};

}  // namespace towsim
