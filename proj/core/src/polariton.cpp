#include "polsim/polariton.hpp"

#include <cmath>
#include "detail/msg.hpp"

#include "polsim/errors.hpp"

namespace polsim {

void FieldState::validate() const {
  if (E.size() < 2 || E.size() != S_a.size() || E.size() != S.size())
    throw config_error("FieldState: component arrays must match and hold at least 2 samples");
  if (!(dz > 0.0) || !std::isfinite(dz) || !std::isfinite(z0) || !std::isfinite(t))
    throw config_error("FieldState: bad grid metadata");
}

PolaritonProfile to_polariton(const FieldState& state, double theta) {
  state.validate();
  const double ct = std::cos(theta), st = std::sin(theta);
  PolaritonProfile p{state.z0, state.dz, state.t, theta, {}};
  p.psi.resize(state.size());
  for (std::size_t i = 0; i < state.size(); ++i)
    p.psi[i] = ct * state.E[i] - st * state.S[i];
  return p;
}

PolaritonProfile to_polariton(const FieldState& state,
                              std::span<const double> theta) {
  state.validate();
  if (theta.size() != state.size())
    throw config_error("to_polariton: theta array size mismatch");
  PolaritonProfile p{state.z0, state.dz, state.t, theta.empty() ? 0.0 : theta[0], {}};
  p.psi.resize(state.size());
  for (std::size_t i = 0; i < state.size(); ++i)
    p.psi[i] = std::cos(theta[i]) * state.E[i] - std::sin(theta[i]) * state.S[i];
  return p;
}

FieldState from_polariton(const PolaritonProfile& profile, double theta,
                          const MediumParams& medium,
                          std::span<const cplx> dS_dt) {
  if (profile.size() < 2) throw config_error("from_polariton: profile too short");
  const double ct = std::cos(theta), st = std::sin(theta);
  FieldState s;
  s.z0 = profile.z0;
  s.dz = profile.dz;
  s.t = profile.t;
  s.E.resize(profile.size());
  s.S.resize(profile.size());
  s.S_a.assign(profile.size(), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < profile.size(); ++i) {
    s.E[i] = ct * profile.psi[i];
    s.S[i] = -st * profile.psi[i];
  }
  if (!dS_dt.empty()) {
    if (dS_dt.size() != profile.size())
      throw config_error("from_polariton: dS_dt size mismatch");
    if (!(st > 0.0))
      throw degenerate_control("from_polariton: S_a branch undefined at theta = 0");
    const double omega = medium.g_root_n * ct / st;
    if (omega < 1e-9 * medium.g_root_n)
      throw degenerate_control(detail::msgf(
          "from_polariton: control %g below floor, cannot form S_a = -(i/Omega) dS/dt", omega));
    const cplx factor = cplx{0.0, -1.0} / omega;
    for (std::size_t i = 0; i < profile.size(); ++i) s.S_a[i] = factor * dS_dt[i];
  }
  return s;
}

double trapezoid_norm2(std::span<const cplx> v, double dz) {
  if (v.size() < 2) return 0.0;
  double s = 0.5 * (std::norm(v.front()) + std::norm(v.back()));
  for (std::size_t i = 1; i + 1 < v.size(); ++i) s += std::norm(v[i]);
  return s * dz;
}

double polariton_norm(const PolaritonProfile& profile) {
  return trapezoid_norm2(profile.psi, profile.dz);
}

double excitation_functional(const FieldState& state) {
  return trapezoid_norm2(state.E, state.dz) + trapezoid_norm2(state.S_a, state.dz) +
         trapezoid_norm2(state.S, state.dz);
}

}  // namespace polsim
