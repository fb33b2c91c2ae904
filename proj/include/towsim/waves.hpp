#pragma once

#include <vector>

namespace towsim {

// One sinusoidal component of a linear (Airy) deep-water spectrum. The wave
// number is tied to the frequency by the dispersion relation k = omega^2 / g
// at construction and is never user-supplied.
struct WaveComponent {
  double amplitude = 0.0;    // A_n [m], >= 0
  double omega = 0.0;        // circular frequency [rad/s], > 0
  double wave_number = 0.0;  // k_n [1/m]
  double direction = 1.0;    // +1 travelling with +x, -1 against
  double phase = 0.0;        // sigma_n [rad] in (-pi, pi]
};

struct WaveVelocity {
  double vx = 0.0;  // horizontal particle velocity [m/s]
  double vz = 0.0;  // vertical particle velocity [m/s]
};

// Planar sea state: a finite set of regular waves plus a lumped surface
// current. All evaluations are pure functions of (x, z, t); an immutable
// field can be shared across any number of threads.
class WaveField {
 public:
  WaveField() = default;
  WaveField(double lumped_current, double gravity);

  void add_component(double amplitude, double omega, double direction, double phase);

  // Sea surface elevation above mean sea level [m].
  double surface_elevation(double x, double t) const;

  // Wave-induced particle velocity at depth z <= 0 (z up, 0 at MSL); each
  // component decays as exp(k z). Rejects z > 0, undefined in the model.
  WaveVelocity particle_velocity(double x, double z, double t) const;

  // U_cr = U_l + U_s, the lumped current plus the surface Stokes drift.
  double surface_current() const;

  // Buoy pitch angle prescribed by the local wave slope [rad]; clockwise
  // positive, always in (-pi/2, pi/2).
  double slope_pitch(double x, double t) const;

  // Surface Stokes drift of the spectrum: sum of d_n omega_n k_n A_n^2.
  double stokes_drift() const;

  double lumped_current() const { return lumped_current_; }
  double gravity() const { return gravity_; }
  const std::vector<WaveComponent>& components() const { return components_; }

 private:
  std::vector<WaveComponent> components_;
  double lumped_current_ = 0.0;  // U_l [m/s]
  double gravity_ = 9.81;        // [m/s^2]
};

}  // namespace towsim
