#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "towsim/dynamics.hpp"

using namespace towsim;

namespace {

constexpr double kGravity = 9.81;

BuoyGeometry bench_geom() {
  return make_buoy_geometry(0.8, 0.25, 0.25, 12.5, 1000.0);
}

HydroCoefficients bench_hydro() {
  HydroCoefficients h;
  h.added_mass_surge = 0.625;
  h.added_mass_heave = 12.5;
  h.potential_damping_surge = 0.0;
  h.potential_damping_heave = 27.5;
  h.skin_coeff_surge = 5e-3;
  h.skin_coeff_heave = 9e-3;
  h.water_density = 1000.0;
  return h;
}

RigidBodyParams bench_body(double cable_mass = 0.5) {
  RigidBodyParams b;
  b.uav_mass = 1.8;
  b.uav_inertia = 0.03;
  b.cable_mass = cable_mass;
  b.cable_length = 7.0;
  b.gravity = kGravity;
  return b;
}

CoupledDynamics flat_sea_dynamics(double cable_mass = 0.5) {
  return CoupledDynamics(bench_geom(), bench_hydro(), bench_body(cable_mass),
                         WaveField(0.0, kGravity));
}

WaveField c2_field() {
  WaveField field(0.0, kGravity);
  field.add_component(0.75, 2.0 * M_PI / 5.7, 1.0, 0.0);
  field.add_component(0.135, 2.0 * M_PI / 3.0, 1.0, M_PI);
  return field;
}

// Builds a self-consistent EnvSample from raw hydro quantities, bypassing the
// wave field, so states can be randomized freely.
EnvSample synth_env(const BuoyGeometry& geom, const HydroCoefficients& hydro,
                    double theta_b, double v_rel_surge, double v_rel_heave,
                    double immersed) {
  EnvSample env;
  env.theta_b = theta_b;
  env.v_rel_surge = v_rel_surge;
  env.v_rel_heave = v_rel_heave;
  env.immersed_volume = immersed;
  env.draft = immersed / geom.waterplane_area();
  env.wetted_area = wetted_area(geom, env.draft);
  env.skin = skin_friction(hydro, env.wetted_area, v_rel_surge, v_rel_heave);
  env.matrices = world_frame_matrices(hydro, geom, theta_b, env.skin);
  return env;
}

struct Mat3 {
  std::array<std::array<double, 3>, 3> a;
  std::array<double, 3> b;
};

// Independent transcription of the three translational/cable equations,
// with the unknown accelerations on the left.
Mat3 reference_system(const SystemState& s, double u1,
                      const EnvSample& env, const BuoyGeometry& geom,
                      const HydroCoefficients& hydro,
                      const RigidBodyParams& body) {
  const double sa = std::sin(s.alpha), ca = std::cos(s.alpha);
  const double ma = body.uav_mass * body.cable_length +
                    body.cable_mass * body.cable_length / 2.0;
  const double ja =
      body.uav_mass * body.cable_length * body.cable_length +
      body.cable_mass * body.cable_length * body.cable_length / 3.0;
  const double mv = body.uav_mass + body.cable_mass;
  const Mat2& M = env.matrices.inertia;
  const Mat2& D = env.matrices.damping;
  Mat3 out;
  out.a = {{{M.a11 + mv, M.a12, -ma * sa},
            {M.a21, M.a22 + mv, ma * ca},
            {-ma * sa, ma * ca, ja}}};
  out.b = {u1 * std::sin(s.theta_u) + ma * ca * s.alpha_dot * s.alpha_dot -
               D.a11 * env.v_rel_surge - D.a12 * env.v_rel_heave,
           u1 * std::cos(s.theta_u) +
               hydro.water_density * env.immersed_volume * body.gravity -
               (geom.mass + mv) * body.gravity +
               ma * sa * s.alpha_dot * s.alpha_dot -
               D.a22 * env.v_rel_heave - D.a21 * env.v_rel_surge,
           u1 * body.cable_length * std::cos(s.alpha + s.theta_u) -
               ma * body.gravity * ca};
  return out;
}

// Explicit adjugate inverse of the 3x3 system (the solve oracle).
std::array<double, 3> invert_and_apply(const Mat3& m) {
  const auto& a = m.a;
  const double det =
      a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
      a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
      a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  std::array<std::array<double, 3>, 3> inv;
  inv[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det;
  inv[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
  inv[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
  inv[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det;
  inv[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
  inv[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
  inv[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det;
  inv[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
  inv[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
  std::array<double, 3> x{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) x[i] += inv[i][j] * m.b[j];
  }
  return x;
}

// Tension recovered from the UAV+cable subsystem surge equation (vehicle
// side, cable-consistent).
double tension_vehicle_side(const SystemState& s, double u1,
                            const Accelerations& acc,
                            const RigidBodyParams& body) {
  const double sa = std::sin(s.alpha), ca = std::cos(s.alpha);
  const double ma = body.uav_mass * body.cable_length +
                    body.cable_mass * body.cable_length / 2.0;
  return (u1 * std::sin(s.theta_u) -
          (body.uav_mass + body.cable_mass) * acc.x_b +
          ma * (ca * s.alpha_dot * s.alpha_dot + sa * acc.alpha)) /
         ca;
}

// Tension from the UAV-only radial equation; exact only for a massless cable.
double tension_uav_radial(const SystemState& s, double u1,
                          const Accelerations& acc,
                          const RigidBodyParams& body) {
  const double sa = std::sin(s.alpha), ca = std::cos(s.alpha);
  return body.uav_mass * body.cable_length * s.alpha_dot * s.alpha_dot -
         body.uav_mass * (acc.x_b * ca + acc.z_b * sa) -
         body.uav_mass * body.gravity * sa +
         u1 * std::sin(s.alpha + s.theta_u);
}

// Static balance with the thrust that zeroes the cable-angle equation.
struct StaticCase {
  SystemState state;
  double thrust;
  double immersed;
};

StaticCase static_balance_case() {
  const BuoyGeometry geom = bench_geom();
  const RigidBodyParams body = bench_body();
  StaticCase c;
  c.thrust = body.coupled_moment() * kGravity / body.cable_length;
  c.immersed = ((geom.mass + body.uav_mass + body.cable_mass) * kGravity -
                c.thrust) /
               (1000.0 * kGravity);
  c.state.alpha = M_PI / 4.0;
  c.state.z_b = geom.height / 2.0 - c.immersed / geom.waterplane_area();
  return c;
}

}  // namespace

TEST_CASE("solve matches the explicit-inverse oracle on random states") {
  const BuoyGeometry geom = bench_geom();
  const HydroCoefficients hydro = bench_hydro();
  const RigidBodyParams body = bench_body();
  const CoupledDynamics dyn(geom, hydro, body, WaveField(0.0, kGravity));

  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> alpha_d(0.1, M_PI / 2.0 - 0.1);
  std::uniform_real_distribution<double> angle_d(-0.7, 0.7);
  std::uniform_real_distribution<double> tilt_d(-0.3, 0.3);
  std::uniform_real_distribution<double> rate_d(-2.0, 2.0);
  std::uniform_real_distribution<double> vel_d(-4.0, 4.0);
  std::uniform_real_distribution<double> vol_d(0.0, geom.volume());
  std::uniform_real_distribution<double> thrust_d(0.0, 70.0);

  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    SystemState s;
    s.alpha = alpha_d(rng);
    s.alpha_dot = rate_d(rng);
    s.theta_u = angle_d(rng);
    const EnvSample env = synth_env(geom, hydro, tilt_d(rng), vel_d(rng),
                                    vel_d(rng), vol_d(rng));
    const double u1 = thrust_d(rng);
    const Accelerations got = dyn.solve(s, u1, 0.0, env);
    const std::array<double, 3> want =
        invert_and_apply(reference_system(s, u1, env, geom, hydro, body));
    worst = std::max({worst, std::abs(got.x_b - want[0]),
                      std::abs(got.z_b - want[1]),
                      std::abs(got.alpha - want[2])});
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("generalized mass matrix is symmetric positive definite") {
  const BuoyGeometry geom = bench_geom();
  const HydroCoefficients hydro = bench_hydro();
  const RigidBodyParams body = bench_body();
  for (double alpha = 0.02; alpha < M_PI / 2.0; alpha += 0.02) {
    SystemState s;
    s.alpha = alpha;
    const EnvSample env = synth_env(geom, hydro, 0.1, 1.0, 0.5, 0.02);
    const auto m = reference_system(s, 10.0, env, geom, hydro, body).a;
    CHECK(std::abs(m[0][1] - m[1][0]) < 1e-12);
    CHECK(std::abs(m[0][2] - m[2][0]) < 1e-12);
    CHECK(std::abs(m[1][2] - m[2][1]) < 1e-12);
    // Sylvester's criterion on the leading principal minors.
    const double m1 = m[0][0];
    const double m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const double m3 =
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
        m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
        m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    CHECK(m1 > 0.0);
    CHECK(m2 > 0.0);
    CHECK(m3 > 0.0);
  }
}

TEST_CASE("planar reflection symmetry on a flat sea") {
  const BuoyGeometry geom = bench_geom();
  const HydroCoefficients hydro = bench_hydro();
  const CoupledDynamics dyn = flat_sea_dynamics();

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> alpha_d(0.2, 1.3);
  std::uniform_real_distribution<double> angle_d(-0.6, 0.6);
  std::uniform_real_distribution<double> rate_d(-1.5, 1.5);
  std::uniform_real_distribution<double> vel_d(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    SystemState s;
    s.alpha = alpha_d(rng);
    s.alpha_dot = rate_d(rng);
    s.theta_u = angle_d(rng);
    const double v_r = vel_d(rng);
    const double z_t = vel_d(rng);
    const double u1 = 25.0;
    const EnvSample env = synth_env(geom, hydro, 0.0, v_r, z_t, 0.0125);

    SystemState mirrored = s;
    mirrored.alpha = M_PI - s.alpha;
    mirrored.alpha_dot = -s.alpha_dot;
    mirrored.theta_u = -s.theta_u;
    const EnvSample env_m = synth_env(geom, hydro, 0.0, -v_r, z_t, 0.0125);

    const Accelerations a = dyn.solve(s, u1, 0.0, env);
    const Accelerations b = dyn.solve(mirrored, u1, 0.0, env_m);
    CHECK(b.x_b == doctest::Approx(-a.x_b).epsilon(1e-9));
    CHECK(b.z_b == doctest::Approx(a.z_b).epsilon(1e-9));
    CHECK(b.alpha == doctest::Approx(-a.alpha).epsilon(1e-9));
  }
}

TEST_CASE("static balance yields zero accelerations") {
  const CoupledDynamics dyn = flat_sea_dynamics();
  const StaticCase c = static_balance_case();
  CHECK(c.thrust == doctest::Approx(20.1105).epsilon(1e-4));
  CHECK(c.immersed == doctest::Approx(0.01275).epsilon(1e-3));

  const EnvSample env =
      dyn.sample_environment(c.state.x_b, c.state.z_b, 0.0, 0.0, 0.0);
  CHECK(env.immersed_volume == doctest::Approx(c.immersed).epsilon(1e-12));
  const Accelerations acc = dyn.solve(c.state, c.thrust, 0.0, env);
  CHECK(std::abs(acc.x_b) < 1e-9);
  CHECK(std::abs(acc.z_b) < 1e-9);
  CHECK(std::abs(acc.alpha) < 1e-9);
}

TEST_CASE("cable tension") {
  const CoupledDynamics dyn = flat_sea_dynamics();
  SUBCASE("zero at rest on a flat sea") {
    const StaticCase c = static_balance_case();
    const EnvSample env =
        dyn.sample_environment(c.state.x_b, c.state.z_b, 0.0, 0.0, 0.0);
    CHECK(std::abs(dyn.cable_tension(c.state, Accelerations{}, env)) < 1e-12);
  }
  SUBCASE("steady tow against skin friction") {
    // D_S1 = 1.5 at A_wt = 0.2, V_r = 3; T = 1.5*3 / cos 45 deg = 6.364.
    SystemState s;
    s.alpha = M_PI / 4.0;
    const EnvSample env =
        synth_env(bench_geom(), bench_hydro(), 0.0, 3.0, 0.0, 0.0125);
    CHECK(env.skin.surge == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(dyn.cable_tension(s, Accelerations{}, env) ==
          doctest::Approx(6.36396).epsilon(1e-4));
  }
  SUBCASE("undefined near a vertical cable") {
    SystemState s;
    s.alpha = M_PI / 2.0 - 1e-8;
    const EnvSample env =
        synth_env(bench_geom(), bench_hydro(), 0.0, 1.0, 0.0, 0.0125);
    CHECK_THROWS_AS(dyn.cable_tension(s, Accelerations{}, env),
                    SimulationError);
  }
}

TEST_CASE("tension route consistency at solved instants") {
  const BuoyGeometry geom = bench_geom();
  const HydroCoefficients hydro = bench_hydro();
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> alpha_d(0.2, 1.3);
  std::uniform_real_distribution<double> angle_d(-0.5, 0.5);
  std::uniform_real_distribution<double> rate_d(-1.0, 1.0);
  std::uniform_real_distribution<double> vel_d(-3.0, 3.0);
  std::uniform_real_distribution<double> vol_d(0.001, 0.05);
  std::uniform_real_distribution<double> thrust_d(0.0, 60.0);

  SUBCASE("vehicle-side route agrees for the benchmark cable mass") {
    const RigidBodyParams body = bench_body(0.5);
    const CoupledDynamics dyn(geom, hydro, body, WaveField(0.0, kGravity));
    for (int i = 0; i < 300; ++i) {
      SystemState s;
      s.alpha = alpha_d(rng);
      s.alpha_dot = rate_d(rng);
      s.theta_u = angle_d(rng);
      const EnvSample env = synth_env(geom, hydro, angle_d(rng) / 2.0,
                                      vel_d(rng), vel_d(rng), vol_d(rng));
      const double u1 = thrust_d(rng);
      const Accelerations acc = dyn.solve(s, u1, 0.0, env);
      const double t_buoy = dyn.cable_tension(s, acc, env);
      const double t_vehicle = tension_vehicle_side(s, u1, acc, body);
      CHECK(std::abs(t_buoy - t_vehicle) < 1e-9);
    }
  }
  SUBCASE("printed UAV-only radial route agrees for a massless cable") {
    const RigidBodyParams body = bench_body(0.0);
    const CoupledDynamics dyn(geom, hydro, body, WaveField(0.0, kGravity));
    for (int i = 0; i < 300; ++i) {
      SystemState s;
      s.alpha = alpha_d(rng);
      s.alpha_dot = rate_d(rng);
      s.theta_u = angle_d(rng);
      const EnvSample env = synth_env(geom, hydro, angle_d(rng) / 2.0,
                                      vel_d(rng), vel_d(rng), vol_d(rng));
      const double u1 = thrust_d(rng);
      const Accelerations acc = dyn.solve(s, u1, 0.0, env);
      const double t_buoy = dyn.cable_tension(s, acc, env);
      const double t_radial = tension_uav_radial(s, u1, acc, body);
      CHECK(std::abs(t_buoy - t_radial) < 1e-9);
    }
  }
}

TEST_CASE("singular system raises a model error") {
  // Degenerate rigid body (no UAV, no cable) zeroes the third row.
  RigidBodyParams body = bench_body();
  body.uav_mass = 1e-30;
  body.cable_mass = 0.0;
  const CoupledDynamics dyn(bench_geom(), bench_hydro(), body,
                            WaveField(0.0, kGravity));
  SystemState s;
  s.alpha = 0.7;
  const EnvSample env =
      synth_env(bench_geom(), bench_hydro(), 0.0, 0.0, 0.0, 0.0125);
  CHECK_THROWS_AS(dyn.solve(s, 10.0, 0.0, env), SimulationError);
}

TEST_CASE("rk4 step") {
  SUBCASE("balanced statics hold to machine precision") {
    const CoupledDynamics dyn = flat_sea_dynamics();
    const StaticCase c = static_balance_case();
    SystemState s = c.state;
    for (int i = 0; i < 100; ++i) {
      s = dyn.step(s, c.thrust, 0.0, 1e-3);
    }
    CHECK(std::abs(s.x_b - c.state.x_b) < 1e-12);
    CHECK(std::abs(s.z_b - c.state.z_b) < 1e-12);
    CHECK(std::abs(s.alpha - c.state.alpha) < 1e-12);
    CHECK(std::abs(s.v) < 1e-12);
    CHECK(std::abs(s.z_b_dot) < 1e-12);
    CHECK(std::abs(s.alpha_dot) < 1e-12);
  }

  SUBCASE("taut-cable kinematic identity holds along steps") {
    const CoupledDynamics dyn = flat_sea_dynamics();
    SystemState s = static_balance_case().state;
    s.v = 0.5;
    const double l = dyn.body().cable_length;
    for (int i = 0; i < 500; ++i) {
      s = dyn.step(s, 22.0, 2e-4, 1e-3);
      const double dist = std::hypot(s.uav_x(l) - s.x_b, s.uav_z(l) - s.z_b);
      CHECK(dist == doctest::Approx(l).epsilon(1e-15));
    }
  }

  SUBCASE("fourth-order self convergence under constant commands") {
    const CoupledDynamics dyn = flat_sea_dynamics();
    SystemState init = static_balance_case().state;
    init.v = 0.5;  // keeps |V_r| away from its kink at zero

    const auto terminal = [&](double dt) {
      SystemState s = init;
      const long steps = std::lround(2.0 / dt);
      for (long i = 0; i < steps; ++i) {
        s = dyn.step(s, 22.0, 5e-4, dt);
      }
      return s;
    };
    const SystemState a = terminal(4e-3);
    const SystemState b = terminal(2e-3);
    const SystemState c = terminal(1e-3);
    const auto dist = [](const SystemState& p, const SystemState& q) {
      return std::sqrt(
          std::pow(p.x_b - q.x_b, 2) + std::pow(p.z_b - q.z_b, 2) +
          std::pow(p.v - q.v, 2) + std::pow(p.z_b_dot - q.z_b_dot, 2) +
          std::pow(p.alpha - q.alpha, 2) +
          std::pow(p.alpha_dot - q.alpha_dot, 2) +
          std::pow(p.theta_u - q.theta_u, 2) +
          std::pow(p.theta_u_dot - q.theta_u_dot, 2));
    };
    const double coarse = dist(a, b);
    const double fine = dist(b, c);
    CHECK(coarse / fine >= 8.0);
  }

  SUBCASE("pinned-buoy pendulum period matches the analytic value") {
    // An enormous added mass pins the buoy; with no thrust the cable-UAV
    // assembly swings about straight-down with period 2 pi sqrt(J_a/(M_a g)).
    HydroCoefficients hydro = bench_hydro();
    hydro.added_mass_surge = 1e12;
    hydro.added_mass_heave = 1e12;
    const RigidBodyParams body = bench_body();
    const CoupledDynamics dyn(bench_geom(), hydro, body,
                              WaveField(0.0, kGravity));

    SystemState s;
    s.z_b = 0.0625;
    s.alpha = -M_PI / 2.0 + 5.0 * M_PI / 180.0;

    const double dt = 1e-3;
    std::vector<double> crossings;
    double prev_dev = s.alpha + M_PI / 2.0;
    for (long i = 0; i < 18000 && crossings.size() < 4; ++i) {
      s = dyn.step(s, 0.0, 0.0, dt);
      const double dev = s.alpha + M_PI / 2.0;
      if (prev_dev < 0.0 && dev >= 0.0) {
        // linear interpolation of the upward crossing time
        crossings.push_back(s.t - dt * dev / (dev - prev_dev));
      }
      prev_dev = dev;
    }
    REQUIRE(crossings.size() >= 3);
    const double period = crossings[2] - crossings[1];
    const double expected =
        2.0 * M_PI *
        std::sqrt(body.coupled_inertia() /
                  (body.coupled_moment() * kGravity));
    CHECK(period == doctest::Approx(expected).epsilon(0.01));
  }

  SUBCASE("non-finite states are fatal") {
    const CoupledDynamics dyn = flat_sea_dynamics();
    SystemState s = static_balance_case().state;
    s.v = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(dyn.step(s, 20.0, 0.0, 1e-3), SimulationError);
  }
}
