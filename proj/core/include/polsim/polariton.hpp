#pragma once

#include <complex>
#include <span>
#include <vector>

#include "polsim/medium.hpp"

namespace polsim {

using cplx = std::complex<double>;

// Snapshot of the coupled state on a uniform z grid.  S_a and S are the
// sqrt(N)-scaled optical and spin coherences, so the linearized equations
// close over (E, S_a, S) and N never appears on its own.
struct FieldState {
  double z0 = 0.0;
  double dz = 1.0;
  double t = 0.0;
  std::vector<cplx> E, S_a, S;

  std::size_t size() const { return E.size(); }
  double z(std::size_t i) const { return z0 + double(i) * dz; }
  void validate() const;
};

// Polariton amplitude psi = cos(theta) E - sin(theta) S on a uniform grid.
struct PolaritonProfile {
  double z0 = 0.0;
  double dz = 1.0;
  double t = 0.0;
  double theta = 0.0;  // mixing angle the profile was formed at
  std::vector<cplx> psi;

  std::size_t size() const { return psi.size(); }
  double z(std::size_t i) const { return z0 + double(i) * dz; }
};

PolaritonProfile to_polariton(const FieldState& state, double theta);

// Per-sample mixing angles, for retarded controls where theta varies in z.
PolaritonProfile to_polariton(const FieldState& state,
                              std::span<const double> theta);

// Reconstruct the fields on the adiabatic branch: E = cos(theta) psi,
// S = -sin(theta) psi.  S_a is zero unless dS_dt is supplied, in which
// case S_a = -(i/Omega) dS/dt with Omega implied by theta; that needs the
// control above its floor.
FieldState from_polariton(const PolaritonProfile& profile, double theta,
                          const MediumParams& medium,
                          std::span<const cplx> dS_dt = {});

double trapezoid_norm2(std::span<const cplx> v, double dz);
double polariton_norm(const PolaritonProfile& profile);

// Conserved excitation content of the lossless system:
// integral of |E|^2 + |S_a|^2 + |S|^2.
double excitation_functional(const FieldState& state);

}  // namespace polsim
