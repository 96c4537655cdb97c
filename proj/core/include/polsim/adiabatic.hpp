#pragma once

#include <span>
#include <vector>

#include "polsim/medium.hpp"
#include "polsim/polariton.hpp"

namespace polsim {

// Control floor: field/control ratios are refused below this.
inline double control_floor(const MediumParams& m) { return 1e-9 * m.g_root_n; }

// How far a polariton travels between t0 and t1:
// c * integral of cos^2 theta(tau).  Adaptive quadrature, absolute
// tolerance 1e-10 * c * (t1 - t0).
double displacement(const ControlSchedule& schedule, const MediumParams& medium,
                    double t0, double t1);

// Shape-preserving transport: each output profile is the initial one
// translated by displacement(initial.t, t).  Values beyond the initial
// grid are zero (compact support).  If support climbs within five cells
// of either grid edge above 1e-8 of the peak, throws domain_overflow.
std::vector<PolaritonProfile> transport(const PolaritonProfile& initial,
                                        const ControlSchedule& schedule,
                                        const MediumParams& medium,
                                        std::span<const double> times);

// Retarded control Omega(z, t) = Omega(t - z/c).  The conserved quantity
// is the ratio E/Omega, carried along characteristics
// dz/dt = c cos^2 theta(z, t); each output sample is traced back to the
// initial time with an adaptive RK pair at relative tolerance 1e-8.
std::vector<PolaritonProfile> transport_retarded(
    const PolaritonProfile& initial_ratio, const ControlSchedule& schedule,
    const MediumParams& medium, std::span<const double> times);

// E/Omega of a field profile under a (non-retarded) schedule, with the
// control floor enforced wherever the field is above 1e-12 of its peak.
PolaritonProfile control_ratio(const PolaritonProfile& e_profile,
                               const ControlSchedule& schedule,
                               const MediumParams& medium);

// Field samples crossing the entry face z = 0, uniform in time.
struct BoundarySeries {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<cplx> E;

  double t_end() const { return t0 + dt * double(E.size() - 1); }
};

// Map a pulse entering the medium onto the internal polariton at the
// moment the tail clears the face: Psi(z) = sqrt(c/v_g) E(t_end - z/v_g).
// Spatial extent shrinks by v_g/c, amplitude grows by sqrt(c/v_g), and
// the norm equals c * integral |E_in|^2 dt exactly.  The control must be
// constant over the entry window.
PolaritonProfile inject_boundary(const BoundarySeries& input,
                                 const ControlSchedule& schedule,
                                 const MediumParams& medium);

}  // namespace polsim
