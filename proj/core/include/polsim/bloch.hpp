#pragma once

#include <cstddef>
#include <vector>

#include "polsim/medium.hpp"
#include "polsim/polariton.hpp"

namespace polsim {

// One full space-time integration task for the linearized system
//
//   (d/dt + c d/dz) E = i g√N S_a
//   d/dt S_a = -gamma_ab S_a + i g√N E + i Omega(t) S
//   d/dt S   = -gamma_bc S   + i Omega(t) S_a
//
// on a grid aligned so that c dt equals dz: the advection becomes an exact
// one-cell shift and all discretization error lives in the local step.
struct Scenario {
  MediumParams medium;
  ControlSchedule schedule;
  Grid grid;
  FieldState initial;
  std::size_t record_every = 1;  // snapshot cadence in steps
  bool allow_strong_probe = false;

  // Local-step scheme.  rk4 is the default classical step; the
  // exponential midpoint is unconditionally stable (exact for frozen
  // control) and serves as a cross-check.
  enum class Stepper { rk4, exponential_midpoint };
  Stepper stepper = Stepper::rk4;

  void validate() const;
};

struct TrajectoryRecord {
  double t = 0.0;
  double excitation = 0.0;       // integral |E|^2 + |S_a|^2 + |S|^2
  double polariton_norm2 = 0.0;  // integral |cos th E - sin th S|^2
  double field_norm2 = 0.0;      // integral |E|^2
  double optical_norm2 = 0.0;    // integral |S_a|^2
  double spin_norm2 = 0.0;       // integral |S|^2
  double peak_z = 0.0;           // interpolated |E|^2 peak position (NaN if dark)
  double transmitted = 0.0;      // cumulative |E|^2 flux through z_max
};

struct Trajectory {
  std::vector<FieldState> snapshots;      // includes initial and final states
  std::vector<TrajectoryRecord> records;  // parallel to snapshots
};

Trajectory integrate(const Scenario& scenario);

// Initial condition on the adiabatic branch for a given polariton pulse:
// E = cos(theta) psi, S = -sin(theta) psi, and (when first_order is set)
// S_a = -(i/Omega) dS/dt evaluated for rigid motion at the group velocity.
FieldState make_adiabatic_state(const PolaritonProfile& psi0,
                                const ControlSchedule& schedule,
                                const MediumParams& medium,
                                bool first_order = true);

struct VelocityFit {
  double velocity = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

// Least-squares slope of the interpolated |E|^2 peak position over the
// snapshots with t in [t_start, t_end].
VelocityFit measure_peak_velocity(const Trajectory& trajectory, double t_start,
                                  double t_end);

struct FidelityReport {
  double fidelity = 0.0;      // |<E_in, E_out>|^2 / (|E_in|^2 |E_out|^2), centroid-aligned
  double energy_ratio = 0.0;  // |E_out|^2 / |E_in|^2
  double shift = 0.0;         // centroid displacement removed before the overlap
};

FidelityReport storage_retrieval_fidelity(const FieldState& input,
                                          const FieldState& output);

}  // namespace polsim
