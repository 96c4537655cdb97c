#include "polsim/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include "detail/msg.hpp"

#include "polsim/errors.hpp"
#include "polsim/interpolate.hpp"
#include "polsim/ode.hpp"
#include "polsim/quadrature.hpp"

namespace polsim {

namespace {

// Compact-support watchdog: amplitude within five cells of an edge must
// stay below 1e-8 of the peak, otherwise the domain no longer contains
// the pulse and translated profiles would silently lose norm.
void check_support(const std::vector<cplx>& psi, double t) {
  double peak = 0.0;
  for (const auto& v : psi) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return;
  const std::size_t guard = std::min<std::size_t>(5, psi.size() / 2);
  double edge = 0.0;
  for (std::size_t i = 0; i < guard; ++i)
    edge = std::max({edge, std::abs(psi[i]), std::abs(psi[psi.size() - 1 - i])});
  if (edge >= 1e-8 * peak)
    throw domain_overflow(detail::msgf(
        "pulse support reached the grid edge at t=%g (edge/peak = %.3e)", t, edge / peak));
}

void require_profile(const PolaritonProfile& p, const char* who) {
  if (p.size() < 2 || !(p.dz > 0.0) || !std::isfinite(p.z0) || !std::isfinite(p.t))
    throw config_error(detail::msgf("%s: malformed profile", who));
}

}  // namespace

double displacement(const ControlSchedule& schedule, const MediumParams& medium,
                    double t0, double t1) {
  medium.validate();
  schedule.validate();
  if (t0 == t1) return 0.0;
  const double tol = 1e-10 * medium.c * std::abs(t1 - t0);
  return integrate_adaptive(
      [&](double tau) { return group_velocity(omega_at(schedule, medium, tau), medium); },
      t0, t1, tol);
}

std::vector<PolaritonProfile> transport(const PolaritonProfile& initial,
                                        const ControlSchedule& schedule,
                                        const MediumParams& medium,
                                        std::span<const double> times) {
  medium.validate();
  schedule.validate();
  require_profile(initial, "transport");
  check_support(initial.psi, initial.t);

  const ProfileInterpolant interp(initial.psi, initial.z0, initial.dz);
  std::vector<PolaritonProfile> out;
  out.reserve(times.size());
  double d = 0.0, t_prev = initial.t;
  for (const double tk : times) {
    if (tk < t_prev)
      throw config_error("transport: output times must be non-decreasing and start at or after the initial time");
    d += displacement(schedule, medium, t_prev, tk);
    t_prev = tk;
    PolaritonProfile p{initial.z0, initial.dz, tk,
                      mixing_angle(omega_at(schedule, medium, tk), medium), {}};
    p.psi.resize(initial.size());
    for (std::size_t i = 0; i < p.psi.size(); ++i) p.psi[i] = interp(initial.z(i) - d);
    check_support(p.psi, tk);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<PolaritonProfile> transport_retarded(
    const PolaritonProfile& initial_ratio, const ControlSchedule& schedule,
    const MediumParams& medium, std::span<const double> times) {
  medium.validate();
  schedule.validate();
  require_profile(initial_ratio, "transport_retarded");

  const ProfileInterpolant interp(initial_ratio.psi, initial_ratio.z0, initial_ratio.dz);
  auto speed = [&](double tau, double zv) {
    return group_velocity(omega_at(schedule, medium, tau - zv / medium.c), medium);
  };

  std::vector<PolaritonProfile> out;
  out.reserve(times.size());
  for (const double tk : times) {
    if (tk < initial_ratio.t)
      throw config_error("transport_retarded: output times must not precede the initial time");
    PolaritonProfile p{initial_ratio.z0, initial_ratio.dz, tk, 0.0, {}};
    p.psi.resize(initial_ratio.size());
    for (std::size_t i = 0; i < p.psi.size(); ++i) {
      const double zi = initial_ratio.z(i);
      const double z_start =
          integrate_dp54(speed, tk, initial_ratio.t, zi, 1e-8, 1e-10 * (1.0 + std::abs(zi))).y;
      p.psi[i] = interp(z_start);
    }
    check_support(p.psi, tk);
    out.push_back(std::move(p));
  }
  return out;
}

PolaritonProfile control_ratio(const PolaritonProfile& e_profile,
                               const ControlSchedule& schedule,
                               const MediumParams& medium) {
  medium.validate();
  schedule.validate();
  require_profile(e_profile, "control_ratio");

  double peak = 0.0;
  for (const auto& v : e_profile.psi) peak = std::max(peak, std::abs(v));
  const double floor = control_floor(medium);

  PolaritonProfile r = e_profile;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double t_eval = schedule.retarded
                              ? e_profile.t - e_profile.z(i) / medium.c
                              : e_profile.t;
    const double omega = omega_at(schedule, medium, t_eval);
    if (omega < floor) {
      if (std::abs(e_profile.psi[i]) > 1e-12 * peak)
        throw degenerate_control(detail::msgf(
            "control_ratio: control %.3e below floor %.3e at z=%g where the field has support",
            omega, floor, e_profile.z(i)));
      r.psi[i] = {0.0, 0.0};
    } else {
      r.psi[i] = e_profile.psi[i] / omega;
    }
  }
  return r;
}

PolaritonProfile inject_boundary(const BoundarySeries& input,
                                 const ControlSchedule& schedule,
                                 const MediumParams& medium) {
  medium.validate();
  schedule.validate();
  if (input.E.size() < 2 || !(input.dt > 0.0) || !std::isfinite(input.t0))
    throw config_error("inject_boundary: malformed boundary series");

  const double omega0 = omega_at(schedule, medium, input.t0);
  if (!schedule.is_constant()) {
    // entry mapping assumes a frozen group velocity across the window
    const std::size_t probes = 64;
    for (std::size_t k = 0; k <= probes; ++k) {
      const double tk = input.t0 + (input.t_end() - input.t0) * double(k) / double(probes);
      if (std::abs(omega_at(schedule, medium, tk) - omega0) > 1e-9 * std::max(omega0, 1.0))
        throw unsupported_regime(
            "inject_boundary: control varies during the entry window; only constant-control entry is supported");
    }
  }
  if (omega0 < control_floor(medium))
    throw degenerate_control("inject_boundary: control below floor, group velocity vanishes at the face");

  const double v0 = group_velocity(omega0, medium);
  const double gain = std::sqrt(medium.c / v0);
  const std::size_t n = input.E.size();

  PolaritonProfile p;
  p.z0 = 0.0;
  p.dz = v0 * input.dt;
  p.t = input.t_end();
  p.theta = mixing_angle(omega0, medium);
  p.psi.resize(n);
  for (std::size_t j = 0; j < n; ++j) p.psi[j] = gain * input.E[n - 1 - j];
  return p;
}

}  // namespace polsim
