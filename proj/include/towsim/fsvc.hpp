#pragma once

#include <cmath>

#include "towsim/attitude.hpp"
#include "towsim/controller.hpp"

namespace towsim {

// Backstepping gain primitives of the forward-surge velocity controller and
// their PID-like images. The primitives are the tuning handles; the derived
// gains are always recomputed.
struct FsvcGains {
  double k_alpha1 = 1.0;
  double k_alpha2 = 6.0;
  double k_v = 60.0;
  double gamma_alpha = 2.0;
  double gamma_v = 9.6;

  double kp_alpha() const { return 1.0 + k_alpha1 * k_alpha2; }
  double kd_alpha() const { return k_alpha1 + k_alpha2; }
  double ki_alpha() const { return gamma_alpha * k_alpha1; }
  double kp_v() const { return k_v; }
  double ki_v() const { return gamma_v; }

  void validate() const;  // throws if any primitive is not > 0
};

// Unity-gain critically damped low-pass 1/(tau s + 1)^2 realized as two
// cascaded first-order states and advanced with the exact zero-order-hold
// solution, so sampled values match the continuous response bit-for-bit
// under piecewise-constant setpoints.
class VelocityReferenceFilter {
 public:
  explicit VelocityReferenceFilter(double tau);

  void update(double setpoint, double dt);
  double value() const { return outer_; }                  // Vbar
  double derivative() const { return (inner_ - outer_) / tau_; }  // Vbar_dot
  void reset();

 private:
  double tau_;
  double inner_ = 0.0;
  double outer_ = 0.0;
};

// Corrected elevation-angle reference asin((zbar_u - z_b) / l) keeping the
// UAV at a constant altitude while the buoy rides the sea surface. Throws
// SimulationError when the commanded height is unreachable with a taut cable.
double corrected_elevation_angle(double uav_altitude, double z_b,
                                 double cable_length);

struct FsvcConfig {
  FsvcGains gains;
  double k_theta1 = 2.0;            // inner attitude loop
  double k_theta2 = 3.4;
  double pitch_limit = M_PI / 4.0;  // theta_um [rad]
  double pitch_cmd_scale = 0.0;     // thetabar_uc [rad]; <= 0 means pitch_limit
  double thrust_limit = 0.0;        // u1 max [N]; <= 0 means 4 m_u g
  double ref_filter_tau = 2.0;      // tau_f [s]
  double derivative_tau = 0.05;     // filtered-differentiation constant [s]
  // Smoothing on the tension feedforward. The raw one-sample-delayed
  // estimate closes a unity-gain loop through the cable and limit-cycles;
  // a short first-order filter keeps the feedforward while damping it.
  double tension_filter_tau = 0.1;  // [s]
  double cos_alpha_min = 1e-3;      // outer-loop hold threshold
};

// Inputs of the pure outer-loop law, all at one control sample. The
// acceleration entries come delayed by one control period.
struct FsvcOuterInputs {
  double alpha = 0.0;
  double alpha_dot = 0.0;
  double tension_estimate = 0.0;  // already clamped >= 0
  double v_dot = 0.0;             // buoy surge acceleration (delayed)
  double z_b_ddot = 0.0;          // buoy heave acceleration (delayed)
  double v_ref_dot = 0.0;
  double alpha_ref_ddot = 0.0;
  double e_v = 0.0;
  double e_alpha = 0.0;
  double e_alpha_dot = 0.0;
  double e_v_int = 0.0;
  double e_alpha_int = 0.0;
};

struct FsvcOuterOutputs {
  double radial = 0.0;       // u_T [N]
  double tangential = 0.0;   // u_alpha [N]
  double thrust = 0.0;       // u1 before clamping [N]
  double pitch_cmd_raw = 0.0;  // theta'_uc [rad]
};

// Polar-coordinate outer loop: feedback-linearizes the surge-velocity and
// elevation channels around the cable geometry and applies the PID-like
// adaptive law on top, then maps (u_T, u_alpha) back to thrust magnitude
// and raw pitch command.
FsvcOuterOutputs fsvc_outer_law(const FsvcOuterInputs& in,
                                const FsvcGains& gains, double uav_mass,
                                double cable_length, double gravity);

// Internal signals exposed for analysis and tests.
struct FsvcDebug {
  double v_ref = 0.0;
  double v_ref_dot = 0.0;
  double alpha_ref = 0.0;
  double alpha_ref_dot = 0.0;
  double alpha_ref_ddot = 0.0;
  double e_v = 0.0;
  double e_alpha = 0.0;
  double e_alpha_dot = 0.0;
  double e_v_int = 0.0;      // e_V^I
  double e_alpha_int = 0.0;  // e_alpha^I
  double delta_v_hat = 0.0;      // gamma_V e_V^I
  double delta_alpha_hat = 0.0;  // gamma_alpha k_alpha1 e_alpha^I
  bool saturated = false;
};

class FsvcController : public Controller {
 public:
  FsvcController(const FsvcConfig& config, const RigidBodyParams& body);

  ControlCommand update(const SystemState& state, const Accelerations& prev,
                        const EnvSample& env, const References& refs,
                        double dt) override;
  void reset() override;
  const char* name() const override { return "fsvc"; }
  double shaped_surge_reference() const override { return v_ref_.value(); }

  const FsvcDebug& debug() const { return debug_; }
  const FsvcConfig& config() const { return config_; }

 private:
  FsvcConfig config_;
  RigidBodyParams body_;
  double thrust_limit_;
  double pitch_cmd_scale_;
  VelocityReferenceFilter v_ref_;
  FilteredDifferentiator alpha_ref_rate_;
  FilteredDifferentiator alpha_ref_accel_;
  InnerAttitudeLoop inner_;
  double e_v_int_ = 0.0;
  double tension_filtered_ = 0.0;
  bool tension_primed_ = false;
  double e_alpha_int_ = 0.0;
  ControlCommand last_cmd_;
  FsvcDebug debug_;
};

}  // namespace towsim
