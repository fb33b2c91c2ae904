#pragma once

#include <cmath>

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "towsim/dynamics.hpp"
#include "towsim/fsvc.hpp"
#include "towsim/pid.hpp"

namespace towsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Piecewise-constant reference entry: the active value of each channel is
// the latest entry at or before t that sets it. The first entry must sit at
// t = 0 so the profile covers the run.
struct SetPoint {
  double t = 0.0;                  // [s]
  double v = 0.0;                  // surge setpoint [m/s]
  std::optional<double> altitude;  // UAV height setpoint [m]
};

enum class ControllerKind { kFsvc, kPid };
const char* to_string(ControllerKind kind);
ControllerKind controller_kind_from_string(const std::string& name);

enum class InitMode { kWaterVelocity, kRest };

// A fully resolved simulation case: environment, physical parameters,
// controller selection and gains, reference profile, solver settings.
// Defaults reproduce the benchmark tethered UAV-buoy configuration.
struct Scenario {
  std::string name = "scenario";
  double duration = 60.0;     // [s]
  double dt_physics = 1e-3;   // [s]
  double dt_control = 5e-3;   // [s]
  ControllerKind controller = ControllerKind::kFsvc;

  // Environment
  double gravity = 9.81;            // [m/s^2]
  double water_density = 1000.0;    // [kg/m^3]
  double air_density = 1.225;       // [kg/m^3]
  double rotor_disk_area = 0.3;     // total disk area for the power model [m^2]
  double lumped_current = 0.0;      // U_l [m/s]
  struct WaveSpec {
    double amplitude = 0.0;   // [m]
    double omega = 0.0;       // [rad/s]
    double direction = 1.0;   // +1 / -1
    double phase = 0.0;       // [rad]
    bool omega_set = false;
    bool period_set = false;
  };
  std::vector<WaveSpec> wave_specs;

  // Buoy
  double buoy_length = 0.8;          // l_b [m]
  double buoy_height = 0.25;         // h_b [m]
  std::optional<double> buoy_width;  // w_b [m]; derived when absent
  double buoy_mass = 12.5;           // m_b [kg]
  double added_mass_surge = 0.625;   // a11 [kg]
  double added_mass_heave = 12.5;    // a33 [kg]
  double potential_damping_surge = 0.0;   // b11 [N s/m]
  double potential_damping_heave = 27.5;  // b33 [N s/m]
  double skin_coeff_surge = 5e-3;    // C_S1
  double skin_coeff_heave = 9e-3;    // C_S2

  // Vehicle
  double uav_mass = 1.8;      // m_u [kg]
  double uav_inertia = 0.03;  // J_u [kg m^2]
  double cable_mass = 0.5;    // m_c [kg]
  double cable_length = 7.0;  // l [m]
  double pitch_limit = M_PI / 4.0;  // theta_um [rad]

  // References
  double alpha0 = M_PI / 4.0;              // nominal elevation [rad]
  std::optional<double> uav_altitude;      // zbar_u [m]; derived when absent
  double ref_filter_tau = 2.0;             // tau_f [s]
  std::vector<SetPoint> setpoints;         // empty -> default profile
  InitMode init_mode = InitMode::kWaterVelocity;
  double disturbance_force_x = 0.0;        // constant surge bias on the buoy [N]

  // Controller settings (gains default to the benchmark tuning). The shared
  // pitch limit and reference-filter constant live above; use fsvc_config()
  // and pid_config() for ready-to-construct configurations.
  FsvcConfig fsvc;
  PidConfig pid;

  FsvcConfig fsvc_config() const;
  PidConfig pid_config() const;

  // Canonical study cases: flat sea (C1) and moderate following seas (C2).
  static Scenario case_c1();
  static Scenario case_c2();

  void validate() const;  // throws ConfigError

  // Derived quantities
  double resolved_buoy_width() const;   // from quarter-immersion mass when unset
  double resolved_uav_altitude() const; // flat-sea float + l sin(alpha0) when unset
  int control_substeps() const;         // dt_control / dt_physics

  // Model builders
  BuoyGeometry buoy_geometry() const;
  HydroCoefficients hydro_coefficients() const;
  RigidBodyParams rigid_body() const;
  WaveField wave_field() const;
  CoupledDynamics dynamics() const;

  // Reference profile (Vbar_0(t), zbar_u(t)); t must lie in [0, duration].
  double surge_setpoint_at(double t) const;
  double altitude_at(double t) const;
};

// Parses the flat key = value scenario format. Keys carry their units
// (amplitude_m, period_s, ...); unknown keys are errors. Waves accept either
// period_s or omega_radps, not both.
Scenario parse_scenario(std::istream& in, const std::string& default_name);
Scenario load_scenario(const std::string& path);

}  // namespace towsim
