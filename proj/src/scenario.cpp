#include "towsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <filesystem>
#include <sstream>

namespace towsim {

const char* to_string(ControllerKind kind) {
  return kind == ControllerKind::kFsvc ? "fsvc" : "pid";
}

ControllerKind controller_kind_from_string(const std::string& name) {
  if (name == "fsvc") return ControllerKind::kFsvc;
  if (name == "pid") return ControllerKind::kPid;
  throw ConfigError("unknown controller '" + name + "' (expected fsvc or pid)");
}

Scenario Scenario::case_c1() {
  Scenario s;
  s.name = "c1";
  s.uav_altitude = 5.0;
  return s;  // flat sea: no wave components, defaults everywhere else
}

Scenario Scenario::case_c2() {
  Scenario s;
  s.name = "c2";
  s.uav_altitude = 5.0;
  WaveSpec w1;
  w1.amplitude = 0.75;
  w1.omega = 2.0 * M_PI / 5.7;
  w1.direction = 1.0;
  w1.phase = 0.0;
  w1.omega_set = true;
  WaveSpec w2;
  w2.amplitude = 0.135;
  w2.omega = 2.0 * M_PI / 3.0;
  w2.direction = 1.0;
  w2.phase = M_PI;
  w2.omega_set = true;
  s.wave_specs = {w1, w2};
  return s;
}

void Scenario::validate() const {
  if (!(duration > 0.0)) throw ConfigError("duration_s must be > 0");
  if (!(dt_physics > 0.0)) throw ConfigError("dt_physics_s must be > 0");
  if (dt_control < dt_physics) {
    throw ConfigError("dt_control_s must be >= dt_physics_s");
  }
  const double ratio = dt_control / dt_physics;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw ConfigError("dt_control_s must be an integer multiple of dt_physics_s");
  }
  for (const WaveSpec& w : wave_specs) {
    if (w.omega_set && w.period_set) {
      throw ConfigError("wave accepts period_s or omega_radps, not both");
    }
    if (w.amplitude > 0.0 && !(w.omega > 0.0)) {
      throw ConfigError("wave with nonzero amplitude needs period_s or omega_radps");
    }
  }
  if (!setpoints.empty()) {
    if (setpoints.front().t != 0.0) {
      throw ConfigError("the first setpoint must start at t = 0");
    }
    for (size_t i = 1; i < setpoints.size(); ++i) {
      if (setpoints[i].t <= setpoints[i - 1].t) {
        throw ConfigError("setpoint times must be strictly increasing");
      }
      if (setpoints[i].t > duration) {
        throw ConfigError("setpoint beyond the scenario duration");
      }
    }
  }
  if (!(alpha0 > 0.0) || !(alpha0 < M_PI / 2.0)) {
    throw ConfigError("alpha0 must lie in (0, 90) degrees");
  }
  buoy_geometry();  // validates flotation
  fsvc.gains.validate();
}

double Scenario::resolved_buoy_width() const {
  if (buoy_width) return *buoy_width;
  // Width that makes the configured mass a quarter of the displaced mass,
  // matching the benchmark geometry (not in the published parameter table).
  return 4.0 * buoy_mass / (water_density * buoy_length * buoy_height);
}

double Scenario::resolved_uav_altitude() const {
  if (uav_altitude) return *uav_altitude;
  // Flat-sea float level h_b/4 plus the cable geometry at the nominal angle.
  return buoy_height / 4.0 + cable_length * std::sin(alpha0);
}

int Scenario::control_substeps() const {
  return static_cast<int>(std::round(dt_control / dt_physics));
}

BuoyGeometry Scenario::buoy_geometry() const {
  try {
    return make_buoy_geometry(buoy_length, buoy_height, resolved_buoy_width(),
                              buoy_mass, water_density);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

HydroCoefficients Scenario::hydro_coefficients() const {
  HydroCoefficients h;
  h.added_mass_surge = added_mass_surge;
  h.added_mass_heave = added_mass_heave;
  h.potential_damping_surge = potential_damping_surge;
  h.potential_damping_heave = potential_damping_heave;
  h.skin_coeff_surge = skin_coeff_surge;
  h.skin_coeff_heave = skin_coeff_heave;
  h.water_density = water_density;
  return h;
}

RigidBodyParams Scenario::rigid_body() const {
  RigidBodyParams b;
  b.uav_mass = uav_mass;
  b.uav_inertia = uav_inertia;
  b.cable_mass = cable_mass;
  b.cable_length = cable_length;
  b.gravity = gravity;
  return b;
}

WaveField Scenario::wave_field() const {
  WaveField field(lumped_current, gravity);
  for (const WaveSpec& w : wave_specs) {
    if (w.amplitude > 0.0) {
      field.add_component(w.amplitude, w.omega, w.direction, w.phase);
    }
  }
  return field;
}

CoupledDynamics Scenario::dynamics() const {
  return CoupledDynamics(buoy_geometry(), hydro_coefficients(), rigid_body(),
                         wave_field(), disturbance_force_x);
}

FsvcConfig Scenario::fsvc_config() const {
  FsvcConfig c = fsvc;
  c.pitch_limit = pitch_limit;
  c.ref_filter_tau = ref_filter_tau;
  return c;
}

PidConfig Scenario::pid_config() const {
  PidConfig c = pid;
  c.pitch_limit = pitch_limit;
  c.ref_filter_tau = ref_filter_tau;
  return c;
}

double Scenario::surge_setpoint_at(double t) const {
  if (setpoints.empty()) {
    // Default profile: accelerate to 5 m/s, then decelerate to 3 m/s halfway.
    return t < duration / 2.0 ? 5.0 : 3.0;
  }
  double value = setpoints.front().v;
  for (const SetPoint& p : setpoints) {
    if (p.t <= t) value = p.v;
  }
  return value;
}

double Scenario::altitude_at(double t) const {
  double value = resolved_uav_altitude();
  for (const SetPoint& p : setpoints) {
    if (p.t <= t && p.altitude) value = *p.altitude;
  }
  return value;
}

namespace {

struct KeyValue {
  std::string key;
  std::string value;
  int line;
};

double parse_number(const KeyValue& kv) {
  try {
    size_t pos = 0;
    const double x = std::stod(kv.value, &pos);
    while (pos < kv.value.size() &&
           std::isspace(static_cast<unsigned char>(kv.value[pos]))) {
      ++pos;
    }
    if (pos != kv.value.size()) throw std::invalid_argument("trailing text");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(kv.line) + ": '" + kv.value +
                      "' is not a number for key " + kv.key);
  }
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

// Splits "wave.2.amplitude_m" into index 2 and field "amplitude_m".
bool split_indexed(const std::string& key, const std::string& prefix,
                   int* index, std::string* field) {
  if (key.rfind(prefix + ".", 0) != 0) return false;
  const std::string rest = key.substr(prefix.size() + 1);
  const auto dot = rest.find('.');
  if (dot == std::string::npos) return false;
  try {
    *index = std::stoi(rest.substr(0, dot));
  } catch (const std::exception&) {
    return false;
  }
  *field = rest.substr(dot + 1);
  return *index >= 1;
}

template <typename T>
T& slot(std::vector<T>& v, int index) {
  if (static_cast<size_t>(index) > v.size()) v.resize(index);
  return v[index - 1];
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& default_name) {
  Scenario s;
  s.name = default_name;

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto comment = raw.find('#');
    if (comment != std::string::npos) raw.erase(comment);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    KeyValue kv{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
    if (kv.key.empty() || kv.value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": empty key or value");
    }

    const std::string& k = kv.key;
    int index = 0;
    std::string field;

    if (k == "name") {
      s.name = kv.value;
    } else if (k == "duration_s") {
      s.duration = parse_number(kv);
    } else if (k == "dt_physics_s") {
      s.dt_physics = parse_number(kv);
    } else if (k == "dt_control_s") {
      s.dt_control = parse_number(kv);
    } else if (k == "controller") {
      s.controller = controller_kind_from_string(kv.value);
    } else if (k == "gravity_mps2") {
      s.gravity = parse_number(kv);
    } else if (k == "water_density_kgpm3") {
      s.water_density = parse_number(kv);
    } else if (k == "air_density_kgpm3") {
      s.air_density = parse_number(kv);
    } else if (k == "rotor_disk_area_m2") {
      s.rotor_disk_area = parse_number(kv);
    } else if (k == "lumped_current_mps") {
      s.lumped_current = parse_number(kv);
    } else if (split_indexed(k, "wave", &index, &field)) {
      Scenario::WaveSpec& w = slot(s.wave_specs, index);
      if (field == "amplitude_m") {
        w.amplitude = parse_number(kv);
      } else if (field == "period_s") {
        const double period = parse_number(kv);
        if (!(period > 0.0)) {
          throw ConfigError("line " + std::to_string(line_no) +
                            ": wave period must be > 0");
        }
        w.omega = 2.0 * M_PI / period;
        w.period_set = true;
      } else if (field == "omega_radps") {
        w.omega = parse_number(kv);
        w.omega_set = true;
      } else if (field == "direction") {
        w.direction = parse_number(kv);
      } else if (field == "phase_rad") {
        w.phase = parse_number(kv);
      } else {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unknown wave key '" + field + "'");
      }
    } else if (k == "buoy_length_m") {
      s.buoy_length = parse_number(kv);
    } else if (k == "buoy_height_m") {
      s.buoy_height = parse_number(kv);
    } else if (k == "buoy_width_m") {
      s.buoy_width = parse_number(kv);
    } else if (k == "buoy_mass_kg") {
      s.buoy_mass = parse_number(kv);
    } else if (k == "added_mass_surge_kg") {
      s.added_mass_surge = parse_number(kv);
    } else if (k == "added_mass_heave_kg") {
      s.added_mass_heave = parse_number(kv);
    } else if (k == "potential_damping_surge_nspm") {
      s.potential_damping_surge = parse_number(kv);
    } else if (k == "potential_damping_heave_nspm") {
      s.potential_damping_heave = parse_number(kv);
    } else if (k == "skin_coeff_surge") {
      s.skin_coeff_surge = parse_number(kv);
    } else if (k == "skin_coeff_heave") {
      s.skin_coeff_heave = parse_number(kv);
    } else if (k == "uav_mass_kg") {
      s.uav_mass = parse_number(kv);
    } else if (k == "uav_inertia_kgm2") {
      s.uav_inertia = parse_number(kv);
    } else if (k == "cable_mass_kg") {
      s.cable_mass = parse_number(kv);
    } else if (k == "cable_length_m") {
      s.cable_length = parse_number(kv);
    } else if (k == "pitch_limit_rad") {
      s.pitch_limit = parse_number(kv);
    } else if (k == "alpha0_deg") {
      s.alpha0 = parse_number(kv) * M_PI / 180.0;
    } else if (k == "uav_altitude_m") {
      s.uav_altitude = parse_number(kv);
    } else if (k == "ref_filter_tau_s") {
      s.ref_filter_tau = parse_number(kv);
    } else if (split_indexed(k, "setpoint", &index, &field)) {
      SetPoint& p = slot(s.setpoints, index);
      if (field == "t_s") {
        p.t = parse_number(kv);
      } else if (field == "v_mps") {
        p.v = parse_number(kv);
      } else if (field == "z_m") {
        p.altitude = parse_number(kv);
      } else {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unknown setpoint key '" + field + "'");
      }
    } else if (k == "init") {
      if (kv.value == "water") {
        s.init_mode = InitMode::kWaterVelocity;
      } else if (kv.value == "rest") {
        s.init_mode = InitMode::kRest;
      } else {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": init must be 'water' or 'rest'");
      }
    } else if (k == "disturbance_force_x_n") {
      s.disturbance_force_x = parse_number(kv);
    } else if (k == "controller.fsvc.k_alpha1") {
      s.fsvc.gains.k_alpha1 = parse_number(kv);
    } else if (k == "controller.fsvc.k_alpha2") {
      s.fsvc.gains.k_alpha2 = parse_number(kv);
    } else if (k == "controller.fsvc.k_v") {
      s.fsvc.gains.k_v = parse_number(kv);
    } else if (k == "controller.fsvc.gamma_alpha") {
      s.fsvc.gains.gamma_alpha = parse_number(kv);
    } else if (k == "controller.fsvc.gamma_v") {
      s.fsvc.gains.gamma_v = parse_number(kv);
    } else if (k == "controller.fsvc.pitch_cmd_scale_rad") {
      s.fsvc.pitch_cmd_scale = parse_number(kv);
    } else if (k == "controller.fsvc.thrust_limit_n") {
      s.fsvc.thrust_limit = parse_number(kv);
    } else if (k == "controller.fsvc.derivative_tau_s") {
      s.fsvc.derivative_tau = parse_number(kv);
    } else if (k == "controller.fsvc.tension_filter_tau_s") {
      s.fsvc.tension_filter_tau = parse_number(kv);
    } else if (k == "controller.pid.v_kp") {
      s.pid.velocity.kp = parse_number(kv);
    } else if (k == "controller.pid.v_ki") {
      s.pid.velocity.ki = parse_number(kv);
    } else if (k == "controller.pid.v_kd") {
      s.pid.velocity.kd = parse_number(kv);
    } else if (k == "controller.pid.z_kp") {
      s.pid.elevation.kp = parse_number(kv);
    } else if (k == "controller.pid.z_ki") {
      s.pid.elevation.ki = parse_number(kv);
    } else if (k == "controller.pid.z_kd") {
      s.pid.elevation.kd = parse_number(kv);
    } else if (k == "controller.pid.pitch_cmd_scale_rad") {
      s.pid.pitch_cmd_scale = parse_number(kv);
    } else if (k == "controller.pid.thrust_limit_n") {
      s.pid.thrust_limit = parse_number(kv);
    } else if (k == "controller.pid.derivative_tau_s") {
      s.pid.derivative_tau = parse_number(kv);
    } else if (k == "controller.inner.k_theta1") {
      s.fsvc.k_theta1 = parse_number(kv);
      s.pid.k_theta1 = s.fsvc.k_theta1;
    } else if (k == "controller.inner.k_theta2") {
      s.fsvc.k_theta2 = parse_number(kv);
      s.pid.k_theta2 = s.fsvc.k_theta2;
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" +
                        k + "'");
    }
  }

  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open scenario file: " + path);
  }
  return parse_scenario(in, std::filesystem::path(path).stem().string());
}

}  // namespace towsim
