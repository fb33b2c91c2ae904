#pragma once

#include <stdexcept>
#include <string>

#include "towsim/buoy.hpp"
#include "towsim/waves.hpp"

namespace towsim {

// Fatal model failure (singular mass matrix, non-finite state, undefined
// tension). Carries a state dump in what().
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// UAV + cable rigid-body constants. The coupled moment M_a and inertia J_a
// of the cable-UAV assembly about the buoy attachment are always derived
// from the primitives, never set directly.
struct RigidBodyParams {
  double uav_mass = 0.0;      // m_u [kg]
  double uav_inertia = 0.0;   // J_u [kg m^2]
  double cable_mass = 0.0;    // m_c [kg]
  double cable_length = 0.0;  // l [m]
  double gravity = 9.81;      // g [m/s^2]

  double coupled_moment() const {  // M_a = m_u l + m_c l / 2
    return uav_mass * cable_length + cable_mass * cable_length / 2.0;
  }
  double coupled_inertia() const {  // J_a = m_u l^2 + m_c l^2 / 3
    const double l2 = cable_length * cable_length;
    return uav_mass * l2 + cable_mass * l2 / 3.0;
  }
};

// Integrated state of the taut-cable system. The UAV position is derived
// through the cable kinematics and never stored; alpha stays in (0, pi/2)
// during valid operation (violations are reported, not clamped).
struct SystemState {
  double t = 0.0;            // [s]
  double x_b = 0.0;          // buoy surge position [m]
  double z_b = 0.0;          // buoy heave position [m]
  double v = 0.0;            // buoy surge velocity V [m/s]
  double z_b_dot = 0.0;      // buoy heave velocity [m/s]
  double alpha = 0.0;        // cable elevation angle [rad]
  double alpha_dot = 0.0;    // [rad/s]
  double theta_u = 0.0;      // UAV pitch, clockwise positive [rad]
  double theta_u_dot = 0.0;  // [rad/s]

  double uav_x(double cable_length) const;
  double uav_z(double cable_length) const;
};

struct Accelerations {
  double x_b = 0.0;      // [m/s^2]
  double z_b = 0.0;      // [m/s^2]
  double alpha = 0.0;    // [rad/s^2]
  double theta_u = 0.0;  // [rad/s^2]
};

// Environment and hydrodynamic quantities evaluated at one buoy state.
struct EnvSample {
  double elevation = 0.0;        // zeta(x_b, t) [m]
  double theta_b = 0.0;          // wave-slope buoy pitch [rad]
  double current = 0.0;          // U_cr [m/s]
  double wave_vx = 0.0;          // particle velocity at clamped depth [m/s]
  double wave_vz = 0.0;
  double v_rel_surge = 0.0;      // V_r = V - U_cr - v_x^w [m/s]
  double v_rel_heave = 0.0;      // z~dot = z_b_dot - v_z^w [m/s]
  double draft = 0.0;            // [m]
  double immersed_volume = 0.0;  // [m^3]
  double wetted_area = 0.0;      // [m^2]
  SkinFriction skin;
  BuoyMatrices matrices;         // world-frame M_b, D_b
};

// Tension recovered from the buoy surge-force balance:
// T = (M_b11 xdd + M_b12 zdd + D_b11 V_r + D_b12 z~dot) / cos(alpha).
// May be negative (slack cable, consumed by the constraint monitor).
double tension_from_surge_balance(const EnvSample& env, double x_b_ddot,
                                  double z_b_ddot, double alpha);

// Coupled buoy-cable-UAV equations of motion under the taut-cable
// constraint, with the environment folded in, advanced by classical RK4.
class CoupledDynamics {
 public:
  CoupledDynamics(const BuoyGeometry& geom, const HydroCoefficients& hydro,
                  const RigidBodyParams& body, const WaveField& field,
                  double external_surge_force = 0.0);

  // Evaluates waves, current, immersion and the frame matrices at the given
  // buoy kinematics. Wave velocities use depth min(z_b, 0).
  EnvSample sample_environment(double x_b, double z_b, double v,
                               double z_b_dot, double t) const;

  // Solves the 3x3 generalized mass system for the translational and cable
  // accelerations; the UAV pitch acceleration decouples as u2 / J_u.
  // Throws SimulationError (with a state dump) if the system is singular.
  Accelerations solve(const SystemState& state, double thrust,
                      double pitch_torque, const EnvSample& env) const;

  // Tension at the buoy attachment for the given solved accelerations.
  // Throws SimulationError when |cos alpha| < 1e-6 (near-vertical cable).
  double cable_tension(const SystemState& state, const Accelerations& accels,
                       const EnvSample& env) const;

  // One fixed RK4 step of length dt with the commands held constant and the
  // environment re-evaluated at each stage. Throws on non-finite results.
  SystemState step(const SystemState& state, double thrust,
                   double pitch_torque, double dt) const;

  const BuoyGeometry& geometry() const { return geom_; }
  const HydroCoefficients& hydro() const { return hydro_; }
  const RigidBodyParams& body() const { return body_; }
  const WaveField& waves() const { return field_; }
  double external_surge_force() const { return external_surge_force_; }

 private:
  BuoyGeometry geom_;
  HydroCoefficients hydro_;
  RigidBodyParams body_;
  WaveField field_;
  double external_surge_force_;  // constant bias on the buoy [N]
};

}  // namespace towsim
