#include "towsim/buoy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace towsim {

BuoyGeometry make_buoy_geometry(double length, double height, double width,
                                double mass, double water_density) {
  BuoyGeometry g{length, height, width, mass};
  if (!(length > 0.0) || !(height > 0.0) || !(width > 0.0)) {
    throw std::invalid_argument("buoy dimensions must be positive");
  }
  if (!(mass > 0.0) || !(mass < water_density * g.volume())) {
    throw std::invalid_argument(
        "buoy mass must lie in (0, rho_w * volume) so the buoy floats");
  }
  return g;
}

double draft(const BuoyGeometry& geom, double z_b, double zeta_at_buoy) {
  const double bottom = z_b - geom.height / 2.0;
  return std::clamp(zeta_at_buoy - bottom, 0.0, geom.height);
}

double immersed_volume(const BuoyGeometry& geom, double z_b,
                       double zeta_at_buoy) {
  return draft(geom, z_b, zeta_at_buoy) * geom.waterplane_area();
}

double wetted_area(const BuoyGeometry& geom, double draft) {
  if (draft < 0.0 || draft > geom.height) {
    throw std::invalid_argument("draft outside [0, buoy height]");
  }
  return 4.0 * geom.length * draft;
}

SkinFriction skin_friction(const HydroCoefficients& coeffs, double wetted_area,
                           double v_rel_surge, double v_rel_heave) {
  if (wetted_area < 0.0) {
    throw std::invalid_argument("wetted area must be >= 0");
  }
  const double dynamic = 0.5 * coeffs.water_density * wetted_area;
  return {coeffs.skin_coeff_surge * dynamic * std::abs(v_rel_surge),
          coeffs.skin_coeff_heave * dynamic * std::abs(v_rel_heave)};
}

namespace {

// R diag(a, b) R^T for the clockwise-positive rotation R(theta).
Mat2 rotate_diag(double a, double b, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Mat2 m;
  m.a11 = a * c * c + b * s * s;
  m.a12 = (b - a) * c * s;
  m.a21 = m.a12;
  m.a22 = a * s * s + b * c * c;
  return m;
}

}  // namespace

BuoyMatrices world_frame_matrices(const HydroCoefficients& coeffs,
                                  const BuoyGeometry& geom, double theta_b,
                                  const SkinFriction& skin) {
  BuoyMatrices out;
  out.inertia = rotate_diag(geom.mass + coeffs.added_mass_surge,
                            geom.mass + coeffs.added_mass_heave, theta_b);
  out.damping = rotate_diag(coeffs.potential_damping_surge + skin.surge,
                            coeffs.potential_damping_heave + skin.heave,
                            theta_b);
  return out;
}

}  // namespace towsim
