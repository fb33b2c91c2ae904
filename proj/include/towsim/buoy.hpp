#pragma once

namespace towsim {

// Homogeneous cuboid buoy. The volume is length*width*height by definition;
// the mass must leave it positively buoyant (m_b in (0, rho_w * V_b)).
struct BuoyGeometry {
  double length = 0.0;  // l_b [m]
  double height = 0.0;  // h_b [m]
  double width = 0.0;   // w_b [m]
  double mass = 0.0;    // m_b [kg]

  double volume() const { return length * width * height; }
  double waterplane_area() const { return length * width; }
};

// Validates positivity and flotation against the given water density.
BuoyGeometry make_buoy_geometry(double length, double height, double width,
                                double mass, double water_density);

struct HydroCoefficients {
  double added_mass_surge = 0.0;        // a11 [kg]
  double added_mass_heave = 0.0;        // a33 [kg]
  double potential_damping_surge = 0.0; // b11 [N s/m]
  double potential_damping_heave = 0.0; // b33 [N s/m]
  double skin_coeff_surge = 0.0;        // C_S1 [-]
  double skin_coeff_heave = 0.0;        // C_S2 [-]
  double water_density = 1000.0;        // rho_w [kg/m^3]
};

// Surge/heave block of a buoy inertia or damping matrix in a given frame.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;

  double det() const { return a11 * a22 - a12 * a21; }
};

// Velocity-proportional drag linearization coefficients D_S1, D_S2 [N s/m].
struct SkinFriction {
  double surge = 0.0;
  double heave = 0.0;
};

struct BuoyMatrices {
  Mat2 inertia;  // M_b
  Mat2 damping;  // D_b
};

// Vertical draft at the buoy position, clamped to [0, height].
double draft(const BuoyGeometry& geom, double z_b, double zeta_at_buoy);

// Displaced volume for the given buoy heave and local sea elevation;
// continuous, monotone non-increasing in z_b, saturating at 0 and V_b.
double immersed_volume(const BuoyGeometry& geom, double z_b, double zeta_at_buoy);

// Wetted area 4 * l_b * draft [m^2]; linear in draft, max 4 l_b h_b at full
// immersion. The draft must already be clamped to [0, h_b].
double wetted_area(const BuoyGeometry& geom, double draft);

// D_S1 = C_S1 * A_wt * 0.5 rho_w |V_r|, D_S2 = C_S2 * A_wt * 0.5 rho_w |z~dot|.
SkinFriction skin_friction(const HydroCoefficients& coeffs, double wetted_area,
                           double v_rel_surge, double v_rel_heave);

// Body-frame diagonal blocks M'_b = diag(m_b + a11, m_b + a33) and
// D'_b = diag(b11 + D_S1, b33 + D_S2), rotated to the world frame by the
// buoy pitch (clockwise positive).
BuoyMatrices world_frame_matrices(const HydroCoefficients& coeffs,
                                  const BuoyGeometry& geom, double theta_b,
                                  const SkinFriction& skin);

}  // namespace towsim
