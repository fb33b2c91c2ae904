#include "towsim/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace towsim {

namespace {

constexpr double kCosAlphaMin = 1e-6;

std::string state_dump(const SystemState& s) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "t=%.6f x_b=%.6g z_b=%.6g v=%.6g z_b_dot=%.6g alpha=%.6g "
                "alpha_dot=%.6g theta_u=%.6g theta_u_dot=%.6g",
                s.t, s.x_b, s.z_b, s.v, s.z_b_dot, s.alpha, s.alpha_dot,
                s.theta_u, s.theta_u_dot);
  return buf;
}

// Solves the 3x3 system in place by Gaussian elimination with partial
// pivoting. Returns false when a pivot degenerates.
bool solve3(std::array<std::array<double, 3>, 3>& a, std::array<double, 3>& b,
            std::array<double, 3>& x) {
  std::array<int, 3> perm = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row) {
      if (std::abs(a[perm[row]][col]) > std::abs(a[perm[pivot]][col])) {
        pivot = row;
      }
    }
    std::swap(perm[col], perm[pivot]);
    const double diag = a[perm[col]][col];
    if (!(std::abs(diag) > 1e-12)) {
      return false;
    }
    for (int row = col + 1; row < 3; ++row) {
      const double factor = a[perm[row]][col] / diag;
      for (int k = col; k < 3; ++k) {
        a[perm[row]][k] -= factor * a[perm[col]][k];
      }
      b[perm[row]] -= factor * b[perm[col]];
    }
  }
  for (int col = 2; col >= 0; --col) {
    double sum = b[perm[col]];
    for (int k = col + 1; k < 3; ++k) {
      sum -= a[perm[col]][k] * x[k];
    }
    x[col] = sum / a[perm[col]][col];
  }
  return true;
}

}  // namespace

double SystemState::uav_x(double cable_length) const {
  return x_b + cable_length * std::cos(alpha);
}

double SystemState::uav_z(double cable_length) const {
  return z_b + cable_length * std::sin(alpha);
}

double tension_from_surge_balance(const EnvSample& env, double x_b_ddot,
                                  double z_b_ddot, double alpha) {
  const Mat2& m = env.matrices.inertia;
  const Mat2& d = env.matrices.damping;
  return (m.a11 * x_b_ddot + m.a12 * z_b_ddot + d.a11 * env.v_rel_surge +
          d.a12 * env.v_rel_heave) /
         std::cos(alpha);
}

CoupledDynamics::CoupledDynamics(const BuoyGeometry& geom,
                                 const HydroCoefficients& hydro,
                                 const RigidBodyParams& body,
                                 const WaveField& field,
                                 double external_surge_force)
    : geom_(geom),
      hydro_(hydro),
      body_(body),
      field_(field),
      external_surge_force_(external_surge_force) {}

EnvSample CoupledDynamics::sample_environment(double x_b, double z_b, double v,
                                              double z_b_dot, double t) const {
  EnvSample env;
  env.elevation = field_.surface_elevation(x_b, t);
  env.theta_b = field_.slope_pitch(x_b, t);
  env.current = field_.surface_current();
  // The buoy rides the surface; clamp the evaluation depth to z <= 0 where
  // the particle-velocity field is defined.
  const WaveVelocity wave = field_.particle_velocity(x_b, std::min(z_b, 0.0), t);
  env.wave_vx = wave.vx;
  env.wave_vz = wave.vz;
  env.v_rel_surge = v - env.current - env.wave_vx;
  env.v_rel_heave = z_b_dot - env.wave_vz;
  env.draft = draft(geom_, z_b, env.elevation);
  env.immersed_volume = env.draft * geom_.waterplane_area();
  env.wetted_area = wetted_area(geom_, env.draft);
  env.skin = skin_friction(hydro_, env.wetted_area, env.v_rel_surge,
                           env.v_rel_heave);
  env.matrices = world_frame_matrices(hydro_, geom_, env.theta_b, env.skin);
  return env;
}

Accelerations CoupledDynamics::solve(const SystemState& state, double thrust,
                                     double pitch_torque,
                                     const EnvSample& env) const {
  const double sa = std::sin(state.alpha);
  const double ca = std::cos(state.alpha);
  const double su = std::sin(state.theta_u);
  const double cu = std::cos(state.theta_u);
  const double ma = body_.coupled_moment();
  const double ja = body_.coupled_inertia();
  const double vehicle_mass = body_.uav_mass + body_.cable_mass;
  const double total_mass = geom_.mass + vehicle_mass;
  const double g = body_.gravity;
  const Mat2& m = env.matrices.inertia;
  const Mat2& d = env.matrices.damping;
  const double rate2 = state.alpha_dot * state.alpha_dot;

  std::array<std::array<double, 3>, 3> a = {{
      {m.a11 + vehicle_mass, m.a12, -ma * sa},
      {m.a21, m.a22 + vehicle_mass, ma * ca},
      {-ma * sa, ma * ca, ja},
  }};
  std::array<double, 3> b = {
      thrust * su + ma * ca * rate2 - d.a11 * env.v_rel_surge -
          d.a12 * env.v_rel_heave + external_surge_force_,
      thrust * cu + hydro_.water_density * env.immersed_volume * g -
          total_mass * g + ma * sa * rate2 - d.a22 * env.v_rel_heave -
          d.a21 * env.v_rel_surge,
      thrust * body_.cable_length * std::cos(state.alpha + state.theta_u) -
          ma * g * ca,
  };

  std::array<double, 3> x{};
  if (!solve3(a, b, x)) {
    throw SimulationError("singular generalized mass matrix at state: " +
                          state_dump(state));
  }
  Accelerations out;
  out.x_b = x[0];
  out.z_b = x[1];
  out.alpha = x[2];
  out.theta_u = pitch_torque / body_.uav_inertia;
  return out;
}

double CoupledDynamics::cable_tension(const SystemState& state,
                                      const Accelerations& accels,
                                      const EnvSample& env) const {
  if (std::abs(std::cos(state.alpha)) < kCosAlphaMin) {
    throw SimulationError("cable tension undefined near vertical cable: " +
                          state_dump(state));
  }
  return tension_from_surge_balance(env, accels.x_b, accels.z_b, state.alpha);
}

SystemState CoupledDynamics::step(const SystemState& state, double thrust,
                                  double pitch_torque, double dt) const {
  struct Derivative {
    double x_b, z_b, v, z_b_dot, alpha, alpha_dot, theta_u, theta_u_dot;
  };

  const auto eval = [&](const SystemState& s) -> Derivative {
    const EnvSample env = sample_environment(s.x_b, s.z_b, s.v, s.z_b_dot, s.t);
    const Accelerations acc = solve(s, thrust, pitch_torque, env);
    return {s.v,     s.z_b_dot,  acc.x_b,   acc.z_b,
            s.alpha_dot, acc.alpha, s.theta_u_dot, acc.theta_u};
  };
  const auto advance = [&](const SystemState& s, const Derivative& k,
                           double h) -> SystemState {
    SystemState n = s;
    n.t = s.t + h;
    n.x_b = s.x_b + h * k.x_b;
    n.z_b = s.z_b + h * k.z_b;
    n.v = s.v + h * k.v;
    n.z_b_dot = s.z_b_dot + h * k.z_b_dot;
    n.alpha = s.alpha + h * k.alpha;
    n.alpha_dot = s.alpha_dot + h * k.alpha_dot;
    n.theta_u = s.theta_u + h * k.theta_u;
    n.theta_u_dot = s.theta_u_dot + h * k.theta_u_dot;
    return n;
  };

  const Derivative k1 = eval(state);
  const Derivative k2 = eval(advance(state, k1, dt / 2.0));
  const Derivative k3 = eval(advance(state, k2, dt / 2.0));
  const Derivative k4 = eval(advance(state, k3, dt));

  SystemState next = state;
  next.t = state.t + dt;
  const auto mix = [&](double a, double b, double c, double d) {
    return dt / 6.0 * (a + 2.0 * b + 2.0 * c + d);
  };
  next.x_b += mix(k1.x_b, k2.x_b, k3.x_b, k4.x_b);
  next.z_b += mix(k1.z_b, k2.z_b, k3.z_b, k4.z_b);
  next.v += mix(k1.v, k2.v, k3.v, k4.v);
  next.z_b_dot += mix(k1.z_b_dot, k2.z_b_dot, k3.z_b_dot, k4.z_b_dot);
  next.alpha += mix(k1.alpha, k2.alpha, k3.alpha, k4.alpha);
  next.alpha_dot += mix(k1.alpha_dot, k2.alpha_dot, k3.alpha_dot, k4.alpha_dot);
  next.theta_u += mix(k1.theta_u, k2.theta_u, k3.theta_u, k4.theta_u);
  next.theta_u_dot +=
      mix(k1.theta_u_dot, k2.theta_u_dot, k3.theta_u_dot, k4.theta_u_dot);

  const bool finite = std::isfinite(next.x_b) && std::isfinite(next.z_b) &&
                      std::isfinite(next.v) && std::isfinite(next.z_b_dot) &&
                      std::isfinite(next.alpha) &&
                      std::isfinite(next.alpha_dot) &&
                      std::isfinite(next.theta_u) &&
                      std::isfinite(next.theta_u_dot);
  if (!finite) {
    throw SimulationError("non-finite state after step from: " +
                          state_dump(state));
  }
  return next;
}

}  // namespace towsim
