#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "polsim/errors.hpp"

namespace polsim {

// Collective light-matter parameters.  The coupling enters the linearized
// dynamics only through g*sqrt(N), so the atom number never appears on its
// own anywhere in the library.
struct MediumParams {
  double g_root_n = 1.0;  // collective coupling rate g*sqrt(N)
  double gamma_ab = 0.0;  // optical (b-a) coherence decay rate
  double gamma_bc = 0.0;  // spin (b-c) coherence decay rate
  double c = 1.0;         // vacuum light speed in grid units

  void validate() const;  // throws config_error
};

// Control field Omega(t).  Three shapes cover every scenario the tool runs:
// a constant hold, the smooth tanh switch pair used for storage cycles, and
// tabulated samples.  The tanh pair parameterizes cot(theta) directly,
//
//   cot(theta(t)) = amplitude * (1 - 0.5 tanh[s (t - t_off)]
//                                  + 0.5 tanh[s (t - t_on)]),
//   Omega(t)      = g_root_n * cot(theta(t)),
//
// which ramps the mixing angle from arccot(amplitude) up to ~pi/2 after
// t_off and back down after t_on.
struct ControlSchedule {
  struct Constant {
    double omega = 0.0;
  };
  struct TanhPair {
    double amplitude = 100.0;  // asymptotic cot(theta)
    double sharpness = 0.1;    // 1/time
    double t_off = 15.0;
    double t_on = 125.0;
  };
  struct Sampled {
    std::vector<double> t;      // strictly increasing
    std::vector<double> omega;  // non-negative
  };

  std::variant<Constant, TanhPair, Sampled> shape = Constant{};
  bool retarded = false;  // callers evaluate at t - z/c when set

  void validate() const;
  bool is_constant() const;
};

// Omega at time t.  Sampled schedules use monotone piecewise-cubic
// interpolation and refuse queries outside their sample range.
double omega_at(const ControlSchedule& schedule, const MediumParams& medium,
                double t);

// Mixing angle theta = atan2(g_root_n, omega), in [0, pi/2]; exactly pi/2
// when omega = 0.
double mixing_angle(double omega, const MediumParams& medium);

// Group velocity c * Omega^2 / (Omega^2 + g^2 N) = c cos^2(theta); 0 when
// the control is off, approaches c for strong control.
double group_velocity(double omega, const MediumParams& medium);

// Uniform space-time grid.  n_z counts spatial samples; n_t counts time
// steps, so a trajectory holds n_t + 1 time samples.
struct Grid {
  double z_min = -60.0;
  double z_max = 360.0;
  std::size_t n_z = 2101;
  double t_min = 0.0;
  double t_max = 200.0;
  std::size_t n_t = 2000;

  double dz() const { return (z_max - z_min) / double(n_z - 1); }
  double dt() const { return (t_max - t_min) / double(n_t); }
  double z(std::size_t i) const { return z_min + double(i) * dz(); }
  double t(std::size_t k) const { return t_min + double(k) * dt(); }

  void validate() const;
};

}  // namespace polsim
