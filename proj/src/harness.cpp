#include "towsim/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace towsim {

ConstraintFlags check_constraints(double tension, double alpha,
                                  double immersed_volume, double buoy_mass,
                                  double cable_mass, double gravity) {
  ConstraintFlags flags;
  flags.taut = tension > 0.0;
  flags.no_hang =
      tension < (buoy_mass + cable_mass) * gravity / std::sin(alpha);
  flags.no_flyover = immersed_volume > 0.0;
  return flags;
}

double induced_power(double thrust, double air_density, double disk_area) {
  return std::pow(thrust, 1.5) / std::sqrt(2.0 * air_density * disk_area);
}

double energy_consumed(const std::vector<double>& thrust_series, double dt,
                       double air_density, double disk_area) {
  double joules = 0.0;
  for (const double thrust : thrust_series) {
    joules += induced_power(thrust, air_density, disk_area) * dt;
  }
  return joules / 1000.0;
}

Simulation::Simulation(const Scenario& scenario)
    : Simulation(scenario, scenario.controller) {}

Simulation::Simulation(const Scenario& scenario, ControllerKind controller)
    : scenario_(scenario), kind_(controller), dynamics_(scenario.dynamics()) {
  scenario_.validate();
  if (kind_ == ControllerKind::kFsvc) {
    controller_ = std::make_unique<FsvcController>(scenario_.fsvc_config(),
                                                   scenario_.rigid_body());
  } else {
    controller_ = std::make_unique<PidController>(scenario_.pid_config(),
                                                  scenario_.rigid_body());
  }
  state_ = initial_state(scenario_);
  total_periods_ = std::lround(scenario_.duration / scenario_.dt_control);
  records_.reserve(total_periods_ + 1);
}

SystemState Simulation::initial_state(const Scenario& scenario) {
  const WaveField field = scenario.wave_field();
  const double x0 = 0.0;
  const double zeta0 = field.surface_elevation(x0, 0.0);

  SystemState s;
  s.t = 0.0;
  s.x_b = x0;
  // Static float level: draft h_b/4 below the local surface.
  s.z_b = zeta0 + scenario.buoy_height / 4.0;
  s.alpha = scenario.alpha0;
  if (scenario.init_mode == InitMode::kWaterVelocity) {
    const WaveVelocity w =
        field.particle_velocity(x0, std::min(s.z_b, 0.0), 0.0);
    s.v = field.surface_current() + w.vx;
    s.z_b_dot = w.vz;
  }
  if (std::abs(scenario.altitude_at(0.0) - s.z_b) >
      scenario.cable_length) {
    throw ConfigError(
        "reference geometry infeasible at t = 0: |zbar_u - z_b| > cable length");
  }
  return s;
}

StepRecord Simulation::make_record(double t, const EnvSample& env,
                                   const ControlCommand& cmd,
                                   const Accelerations& accels) const {
  StepRecord r;
  r.t = t;
  r.x_b = state_.x_b;
  r.z_b = state_.z_b;
  r.v = state_.v;
  r.alpha = state_.alpha;
  r.theta_u = state_.theta_u;
  r.theta_b = env.theta_b;
  r.z_u = state_.uav_z(scenario_.cable_length);
  r.thrust = cmd.thrust;
  r.pitch_torque = cmd.pitch_torque;
  r.radial = cmd.radial;
  r.tangential = cmd.tangential;
  r.tension = dynamics_.cable_tension(state_, accels, env);
  r.tension_estimate = cmd.tension_estimate;
  r.immersion_ratio = env.immersed_volume / dynamics_.geometry().volume();
  r.current = env.current;
  r.wave_vx = env.wave_vx;
  r.wave_vz = env.wave_vz;
  r.e_v = state_.v - controller_->shaped_surge_reference();
  r.e_zu = scenario_.altitude_at(t) - r.z_u;
  r.constraints =
      check_constraints(r.tension, r.alpha, env.immersed_volume,
                        scenario_.buoy_mass, scenario_.cable_mass,
                        scenario_.gravity);
  r.power = induced_power(cmd.thrust, scenario_.air_density,
                          scenario_.rotor_disk_area);
  return r;
}

bool Simulation::advance() {
  if (finished_) return false;
  if (period_ >= total_periods_) {
    // Terminal row: final state under the held command.
    const double t_end = total_periods_ * scenario_.dt_control;
    const EnvSample env = dynamics_.sample_environment(
        state_.x_b, state_.z_b, state_.v, state_.z_b_dot, t_end);
    const Accelerations accels =
        dynamics_.solve(state_, last_cmd_.thrust, last_cmd_.pitch_torque, env);
    records_.push_back(make_record(t_end, env, last_cmd_, accels));
    finished_ = true;
    return false;
  }

  const double t = period_ * scenario_.dt_control;
  const EnvSample env = dynamics_.sample_environment(
      state_.x_b, state_.z_b, state_.v, state_.z_b_dot, t);
  References refs;
  refs.surge_setpoint = scenario_.surge_setpoint_at(t);
  refs.uav_altitude = scenario_.altitude_at(t);

  const ControlCommand cmd = controller_->update(state_, prev_accels_, env,
                                                 refs, scenario_.dt_control);
  const Accelerations accels =
      dynamics_.solve(state_, cmd.thrust, cmd.pitch_torque, env);

  records_.push_back(make_record(t, env, cmd, accels));
  prev_accels_ = accels;
  last_cmd_ = cmd;

  const int substeps = scenario_.control_substeps();
  for (int i = 0; i < substeps; ++i) {
    state_ = dynamics_.step(state_, cmd.thrust, cmd.pitch_torque,
                            scenario_.dt_physics);
  }
  state_.t = (period_ + 1) * scenario_.dt_control;
  ++period_;
  return true;
}

void Simulation::run_to_end() {
  while (advance()) {
  }
}

RunSummary Simulation::summarize() const {
  RunSummary s;
  s.scenario = scenario_.name;
  s.controller = to_string(kind_);
  s.duration = total_periods_ * scenario_.dt_control;

  const double dt = scenario_.dt_control;
  double sum_ev = 0.0;
  double sum_ezu = 0.0;
  double energy = 0.0;
  long n = 0;
  long last_taut = -2, last_hang = -2, last_fly = -2;
  // Consecutive violating periods merge into one closed interval.
  const auto track = [](std::vector<Interval>& intervals, long& last,
                        long index, double t) {
    if (index == last + 1 && !intervals.empty()) {
      intervals.back().end = t;
    } else {
      intervals.push_back({t, t});
    }
    last = index;
  };
  for (long i = 0; i < static_cast<long>(records_.size()); ++i) {
    const StepRecord& r = records_[i];
    if (i >= total_periods_) break;  // terminal row excluded from metrics
    sum_ev += std::abs(r.e_v);
    sum_ezu += std::abs(r.e_zu);
    energy += r.power * dt;
    if (!r.constraints.taut) track(s.taut_violations, last_taut, i, r.t);
    if (!r.constraints.no_hang) track(s.hang_violations, last_hang, i, r.t);
    if (!r.constraints.no_flyover) track(s.flyover_violations, last_fly, i, r.t);
    ++n;
  }
  if (n > 0) {
    s.mean_abs_e_v_cmps = 100.0 * sum_ev / n;
    s.mean_abs_e_zu_cm = 100.0 * sum_ezu / n;
  }
  s.energy_kj = energy / 1000.0;
  return s;
}

namespace {

void append_row(std::string& out, const StepRecord& r) {
  char buf[640];
  std::snprintf(
      buf, sizeof(buf),
      "%.6f,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,"
      "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%d,%d,%d,%.10g\n",
      r.t, r.x_b, r.z_b, r.v, r.alpha, r.theta_u, r.theta_b, r.z_u, r.thrust,
      r.pitch_torque, r.radial, r.tangential, r.tension, r.tension_estimate,
      r.immersion_ratio, r.current, r.wave_vx, r.wave_vz, r.e_v, r.e_zu,
      r.constraints.taut ? 1 : 0, r.constraints.no_hang ? 1 : 0,
      r.constraints.no_flyover ? 1 : 0, r.power);
  out += buf;
}

constexpr const char* kCsvHeader =
    "# towsim step_record schema v1\n"
    "t_s,x_b_m,z_b_m,v_mps,alpha_rad,theta_u_rad,theta_b_rad,z_u_m,u1_n,"
    "u2_nm,u_t_n,u_alpha_n,tension_n,tension_est_n,vim_ratio,current_mps,"
    "wave_vx_mps,wave_vz_mps,e_v_mps,e_zu_m,taut_ok,no_hang_ok,no_flyover_ok,"
    "power_w\n";

void write_intervals(const std::vector<Interval>& intervals,
                     const char* label, std::ostream& out) {
  out << "  " << label << ": ";
  if (intervals.empty()) {
    out << "none\n";
    return;
  }
  char buf[64];
  for (size_t i = 0; i < intervals.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "[%.3f, %.3f]", intervals[i].begin,
                  intervals[i].end);
    out << (i ? " " : "") << buf;
  }
  out << "\n";
}

}  // namespace

void write_csv(const std::vector<StepRecord>& records, std::ostream& out) {
  std::string body = kCsvHeader;
  body.reserve(body.size() + records.size() * 320);
  for (const StepRecord& r : records) {
    append_row(body, r);
  }
  out << body;
}

void write_summary(const RunSummary& s, std::ostream& out) {
  char buf[160];
  out << "run: " << s.scenario << " / " << s.controller << "\n";
  std::snprintf(buf, sizeof(buf),
                "  mean |e_V|  : %8.2f cm/s\n  mean |e_zu| : %8.2f cm\n"
                "  energy      : %8.2f kJ\n  duration    : %8.2f s\n",
                s.mean_abs_e_v_cmps, s.mean_abs_e_zu_cm, s.energy_kj,
                s.duration);
  out << buf;
  write_intervals(s.taut_violations, "taut-cable violations", out);
  write_intervals(s.hang_violations, "no-hang violations", out);
  write_intervals(s.flyover_violations, "no-flyover violations", out);
}

void write_comparison(const std::string& scenario_name,
                      const std::vector<RunSummary>& summaries,
                      std::ostream& out) {
  out << "case: " << scenario_name << "\n";
  out << "controller    mean |e_V| (cm/s)    mean |e_zu| (cm)    energy (kJ)\n";
  char buf[160];
  for (const RunSummary& s : summaries) {
    std::snprintf(buf, sizeof(buf), "%-10s %16.2f %19.2f %14.2f\n",
                  s.controller.c_str(), s.mean_abs_e_v_cmps,
                  s.mean_abs_e_zu_cm, s.energy_kj);
    out << buf;
  }
  for (const RunSummary& s : summaries) {
    out << "\nconstraints (" << s.controller << "):\n";
    write_intervals(s.taut_violations, "taut-cable violations", out);
    write_intervals(s.hang_violations, "no-hang violations", out);
    write_intervals(s.flyover_violations, "no-flyover violations", out);
  }
}

void write_assumptions(const Scenario& scenario, std::ostream& out) {
  char buf[256];
  out << "model assumptions for scenario '" << scenario.name << "'\n";
  std::snprintf(buf, sizeof(buf),
                "  buoy width: %.6g m (derived from quarter-immersion mass; "
                "not a published parameter)\n",
                scenario.resolved_buoy_width());
  out << buf;
  out << "  wetted-area law: A_wt = 4 l_b draft (linear; attains the stated "
         "bound 4 l_b h_b at full immersion)\n";
  std::snprintf(buf, sizeof(buf),
                "  surface Stokes drift: U_s = sum d_n w_n k_n A_n^2 = %.6g "
                "m/s for this spectrum\n",
                scenario.wave_field().stokes_drift());
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "  energy surrogate: induced power u1^1.5 / sqrt(2 rho_air "
                "A_disk), rho_air = %.4g kg/m^3, A_disk = %.4g m^2 "
                "(comparison-only; absolute kJ not comparable to motor-model "
                "figures)\n",
                scenario.air_density, scenario.rotor_disk_area);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "  backstepping root choice: k_alpha1 = %.6g, k_alpha2 = %.6g "
                "(gamma_alpha = %.6g)\n",
                scenario.fsvc.gains.k_alpha1, scenario.fsvc.gains.k_alpha2,
                scenario.fsvc.gains.gamma_alpha);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "  pitch-command saturation scale: %.6g rad (tanh scale; "
                "defaults to the pitch limit)\n",
                scenario.fsvc.pitch_cmd_scale > 0.0
                    ? scenario.fsvc.pitch_cmd_scale
                    : scenario.pitch_limit);
  out << buf;
  out << "  controller acceleration feedback: previous control period's "
         "solved accelerations (one-sample delay; zeros at the first "
         "sample)\n";
  std::snprintf(buf, sizeof(buf),
                "  tension feedforward smoothing: first-order filter, tau = "
                "%.4g s on the delayed estimate\n",
                scenario.fsvc.tension_filter_tau);
  out << buf;
}

RunOutput run_scenario(const Scenario& scenario, ControllerKind controller,
                       const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path csv_path =
      out_dir / (scenario.name + "_" + to_string(controller) + ".csv");

  Simulation sim(scenario, controller);
  try {
    sim.run_to_end();
  } catch (const SimulationError& err) {
    // Flush the partial log plus an error record before propagating.
    std::ofstream csv(csv_path, std::ios::binary);
    write_csv(sim.records(), csv);
    csv << "# fatal: " << err.what() << "\n";
    throw;
  }

  std::ofstream csv(csv_path, std::ios::binary);
  write_csv(sim.records(), csv);

  RunOutput out;
  out.summary = sim.summarize();
  out.csv_path = csv_path;
  return out;
}

}  // namespace towsim
