#include "towsim/waves.hpp"

#include <cmath>
#include <stdexcept>

namespace towsim {

WaveField::WaveField(double lumped_current, double gravity)
    : lumped_current_(lumped_current), gravity_(gravity) {
  if (!(gravity > 0.0)) {
    throw std::invalid_argument("gravity must be positive");
  }
}

void WaveField::add_component(double amplitude, double omega, double direction,
                              double phase) {
  if (amplitude < 0.0) {
    throw std::invalid_argument("wave amplitude must be >= 0");
  }
  if (!(omega > 0.0)) {
    throw std::invalid_argument("wave circular frequency must be > 0");
  }
  if (direction != 1.0 && direction != -1.0) {
    throw std::invalid_argument("wave direction must be +1 or -1");
  }
  WaveComponent c;
  c.amplitude = amplitude;
  c.omega = omega;
  c.wave_number = omega * omega / gravity_;  // deep-water dispersion
  c.direction = direction;
  c.phase = phase;
  components_.push_back(c);
}

double WaveField::surface_elevation(double x, double t) const {
  double zeta = 0.0;
  for (const WaveComponent& c : components_) {
    zeta += c.amplitude *
            std::sin(c.direction * c.omega * t - c.wave_number * x + c.phase);
  }
  return zeta;
}

WaveVelocity WaveField::particle_velocity(double x, double z, double t) const {
  if (z > 0.0) {
    throw std::invalid_argument(
        "particle velocity is undefined above mean sea level (z > 0)");
  }
  WaveVelocity v;
  for (const WaveComponent& c : components_) {
    const double arg = c.direction * c.omega * t - c.wave_number * x + c.phase;
    const double scale =
        c.direction * c.omega * c.amplitude * std::exp(c.wave_number * z);
    v.vx += scale * std::sin(arg);
    v.vz += scale * std::cos(arg);
  }
  return v;
}

double WaveField::stokes_drift() const {
  double drift = 0.0;
  for (const WaveComponent& c : components_) {
    drift += c.direction * c.omega * c.wave_number * c.amplitude * c.amplitude;
  }
  return drift;
}

double WaveField::surface_current() const {
  return lumped_current_ + stokes_drift();
}

double WaveField::slope_pitch(double x, double t) const {
  double slope = 0.0;
  for (const WaveComponent& c : components_) {
    slope += c.amplitude * c.wave_number *
             std::cos(c.direction * c.omega * t - c.wave_number * x + c.phase);
  }
  return std::atan(slope);
}

}  // namespace towsim
