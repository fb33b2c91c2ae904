#pragma once

#include <filesystem>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "towsim/controller.hpp"
#include "towsim/scenario.hpp"

namespace towsim {

struct ConstraintFlags {
  bool taut = true;        // T > 0
  bool no_hang = true;     // T < (m_b + m_c) g / sin(alpha)
  bool no_flyover = true;  // immersed volume > 0

  bool all_ok() const { return taut && no_hang && no_flyover; }
};

ConstraintFlags check_constraints(double tension, double alpha,
                                  double immersed_volume, double buoy_mass,
                                  double cable_mass, double gravity);

// Momentum-theory induced power of the commanded thrust:
// P = u1^{3/2} / sqrt(2 rho_air A_disk). A declared surrogate for the
// consumed-energy comparison, not a motor model.
double induced_power(double thrust, double air_density, double disk_area);

// Integrates the power surrogate over a thrust sample series held for dt
// each; returns kJ.
double energy_consumed(const std::vector<double>& thrust_series, double dt,
                       double air_density, double disk_area);

// One log row per control period.
struct StepRecord {
  double t = 0.0;
  double x_b = 0.0, z_b = 0.0, v = 0.0;
  double alpha = 0.0, theta_u = 0.0, theta_b = 0.0;
  double z_u = 0.0;
  double thrust = 0.0, pitch_torque = 0.0, radial = 0.0, tangential = 0.0;
  double tension = 0.0, tension_estimate = 0.0;
  double immersion_ratio = 0.0;  // V_im / V_b
  double current = 0.0, wave_vx = 0.0, wave_vz = 0.0;
  double e_v = 0.0;   // V - Vbar (filtered reference)
  double e_zu = 0.0;  // zbar_u - z_u
  ConstraintFlags constraints;
  double power = 0.0;  // [W]
};

struct Interval {
  double begin = 0.0;
  double end = 0.0;
};

struct RunSummary {
  std::string scenario;
  std::string controller;
  double duration = 0.0;
  double mean_abs_e_v_cmps = 0.0;  // [cm/s]
  double mean_abs_e_zu_cm = 0.0;   // [cm]
  double energy_kj = 0.0;
  std::vector<Interval> taut_violations;
  std::vector<Interval> hang_violations;
  std::vector<Interval> flyover_violations;
};

// Drives one scenario with one controller: controller update at the control
// rate, RK4 physics substeps in between, constraint monitoring and metric
// accumulation per period. Owns all of its state; distinct simulations are
// independent.
class Simulation {
 public:
  explicit Simulation(const Scenario& scenario);
  Simulation(const Scenario& scenario, ControllerKind controller);

  // Runs one control period. Returns false once the horizon is reached (the
  // terminal record is appended at that point).
  bool advance();
  void run_to_end();

  const SystemState& state() const { return state_; }
  const std::vector<StepRecord>& records() const { return records_; }
  const CoupledDynamics& dynamics() const { return dynamics_; }
  const Scenario& scenario() const { return scenario_; }
  Controller& controller() { return *controller_; }
  const ControlCommand& last_command() const { return last_cmd_; }
  const Accelerations& last_accelerations() const { return prev_accels_; }
  double time() const { return state_.t; }

  RunSummary summarize() const;

  // Initial state per the study convention: buoy at its static float level on
  // the local surface, velocities matched to the zero-time water velocity,
  // cable at the nominal elevation angle.
  static SystemState initial_state(const Scenario& scenario);

 private:
  StepRecord make_record(double t, const EnvSample& env,
                         const ControlCommand& cmd,
                         const Accelerations& accels) const;

  Scenario scenario_;
  ControllerKind kind_;
  CoupledDynamics dynamics_;
  std::unique_ptr<Controller> controller_;
  SystemState state_;
  Accelerations prev_accels_;
  ControlCommand last_cmd_;
  std::vector<StepRecord> records_;
  long period_ = 0;
  long total_periods_ = 0;
  bool finished_ = false;
};

// CSV with a stable, versioned column set; formatting is deterministic so
// identical runs produce byte-identical files.
void write_csv(const std::vector<StepRecord>& records, std::ostream& out);

void write_summary(const RunSummary& summary, std::ostream& out);
void write_comparison(const std::string& scenario_name,
                      const std::vector<RunSummary>& summaries,
                      std::ostream& out);
// Model assumptions that stand in for unpublished parameters, with the
// values active in this scenario.
void write_assumptions(const Scenario& scenario, std::ostream& out);

struct RunOutput {
  RunSummary summary;
  std::filesystem::path csv_path;
};

// Runs one scenario+controller, writing <name>_<controller>.csv. On a fatal
// dynamics error the partial CSV plus an error record are flushed before the
// exception is rethrown.
RunOutput run_scenario(const Scenario& scenario, ControllerKind controller,
                       const std::filesystem::path& out_dir);

}  // namespace towsim
