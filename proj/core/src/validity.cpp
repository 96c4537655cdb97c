#include "polsim/validity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "detail/msg.hpp"
#include "polsim/adiabatic.hpp"
#include "polsim/errors.hpp"

namespace polsim {

std::vector<cplx> first_correction(const FieldState& prev, const FieldState& mid,
                                   const FieldState& next,
                                   const ControlSchedule& schedule,
                                   const MediumParams& medium) {
  medium.validate();
  schedule.validate();
  prev.validate();
  mid.validate();
  next.validate();
  const std::size_t n = mid.size();
  if (prev.size() != n || next.size() != n ||
      std::abs(prev.dz - mid.dz) > 1e-9 * mid.dz ||
      std::abs(next.dz - mid.dz) > 1e-9 * mid.dz ||
      std::abs(prev.z0 - mid.z0) > 1e-6 * mid.dz ||
      std::abs(next.z0 - mid.z0) > 1e-6 * mid.dz)
    throw config_error("first_correction: snapshots live on different grids");
  const double dt = mid.t - prev.t;
  if (!(dt > 0.0) || std::abs((next.t - mid.t) - dt) > 1e-9 * dt)
    throw config_error(detail::msgf(
        "first_correction: snapshots not equally spaced in time (%g, %g, %g)",
        prev.t, mid.t, next.t));

  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    peak = std::max({peak, std::abs(prev.E[i]), std::abs(mid.E[i]), std::abs(next.E[i])});
  const double support = 1e-12 * peak;
  const double floor = control_floor(medium);

  std::vector<cplx> corr(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lag = schedule.retarded ? mid.z(i) / medium.c : 0.0;
    const double w_prev = omega_at(schedule, medium, prev.t - lag);
    const double w_mid = omega_at(schedule, medium, mid.t - lag);
    const double w_next = omega_at(schedule, medium, next.t - lag);
    const double w_min = std::min({w_prev, w_mid, w_next});
    if (w_min < floor) {
      if (std::abs(mid.E[i]) > support)
        throw degenerate_control(detail::msgf(
            "first_correction: control %.3e below floor at z=%g on the pulse support",
            w_min, mid.z(i)));
      corr[i] = {0.0, 0.0};
      continue;
    }
    const cplx u_prev = medium.g_root_n * prev.E[i] / w_prev;
    const cplx u_mid = medium.g_root_n * mid.E[i] / w_mid;
    const cplx u_next = medium.g_root_n * next.E[i] / w_next;
    const cplx du = (u_next - u_prev) / (2.0 * dt);
    const cplx ddu = (u_next - 2.0 * u_mid + u_prev) / (dt * dt);
    const double dw = (w_next - w_prev) / (2.0 * dt);
    const double w2 = w_mid * w_mid;
    corr[i] = ddu / w2 - du * dw / (w2 * w_mid) + medium.gamma_ab * du / w2;
  }
  return corr;
}

double z_max(const MediumParams& medium, double l_p) {
  medium.validate();
  if (!(l_p > 0.0) || !std::isfinite(l_p))
    throw config_error(detail::msgf("z_max: pulse length must be positive, got %g", l_p));
  if (medium.gamma_ab == 0.0) return std::numeric_limits<double>::infinity();
  return medium.g_root_n * medium.g_root_n / medium.gamma_ab * l_p * l_p / medium.c;
}

AdiabaticityFigure adiabaticity_figure(const MediumParams& medium, double l_p) {
  medium.validate();
  if (!(l_p > 0.0) || !std::isfinite(l_p))
    throw config_error(detail::msgf(
        "adiabaticity_figure: pulse length must be positive, got %g", l_p));
  AdiabaticityFigure fig;
  fig.value = (medium.gamma_ab == 0.0)
                  ? std::numeric_limits<double>::infinity()
                  : medium.g_root_n * medium.g_root_n * l_p / (medium.c * medium.gamma_ab);
  fig.band = fig.value < 10.0    ? AdiabaticityBand::poor
             : fig.value <= 100.0 ? AdiabaticityBand::marginal
                                  : AdiabaticityBand::good;
  return fig;
}

double storage_bound(const MediumParams& medium, int n_e) {
  medium.validate();
  if (n_e < 1)
    throw config_error(detail::msgf("storage_bound: need n_e >= 1, got %d", n_e));
  if (medium.gamma_bc == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (medium.gamma_bc * n_e);
}

int excitation_count(const FieldState& state) {
  state.validate();
  const double v = trapezoid_norm2(state.S, state.dz);
  if (v <= 0.0) return 0;
  return int(std::ceil(v - 1e-9 * std::max(1.0, v)));
}

double intensity_ratio_residual(const FieldState& state, double omega,
                                const MediumParams& medium) {
  medium.validate();
  state.validate();
  if (!(omega >= control_floor(medium)))
    throw degenerate_control(detail::msgf(
        "intensity_ratio_residual: control %g below floor", omega));

  double max_e2 = 0.0, max_s2 = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    max_e2 = std::max(max_e2, std::norm(state.E[i]));
    max_s2 = std::max(max_s2, std::norm(state.S[i]));
  }
  if (max_s2 <= 0.0)
    throw config_error("intensity_ratio_residual: zero matter amplitude, residual undefined");

  const double tan = medium.g_root_n / omega;
  const double tan2 = tan * tan;
  double worst = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double e2 = std::norm(state.E[i]);
    const double s2 = std::norm(state.S[i]);
    if (e2 < 1e-6 * max_e2 && s2 < 1e-6 * max_s2) continue;  // off the pulse
    worst = std::max(worst, std::abs(tan2 * e2 - s2));
  }
  return worst / max_s2;
}

}  // namespace polsim
