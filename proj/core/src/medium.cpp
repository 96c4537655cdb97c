#include "polsim/medium.hpp"

#include <algorithm>
#include <cmath>
#include "detail/msg.hpp"

namespace polsim {

namespace {

bool finite(double x) { return std::isfinite(x); }

// Fritsch-Carlson slope at an interior node: the harmonic-mean formula,
// zero where the data has a local extremum.  Keeps the interpolant inside
// the data's monotone envelope, which is what a control amplitude needs.
double fc_slope(double h0, double h1, double s0, double s1) {
  if (s0 * s1 <= 0.0) return 0.0;
  const double w0 = 2.0 * h1 + h0;
  const double w1 = h1 + 2.0 * h0;
  return (w0 + w1) / (w0 / s0 + w1 / s1);
}

double pchip_eval(const std::vector<double>& xs, const std::vector<double>& ys,
                  double x) {
  const std::size_t n = xs.size();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = (it == xs.begin()) ? 0 : std::size_t(it - xs.begin()) - 1;
  if (i >= n - 1) i = n - 2;

  auto secant = [&](std::size_t k) { return (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]); };
  auto slope = [&](std::size_t k) -> double {
    if (k == 0) {
      // one-sided, clipped to preserve monotonicity on the first interval
      const double h0 = xs[1] - xs[0], h1 = (n > 2) ? xs[2] - xs[1] : h0;
      const double s0 = secant(0), s1 = (n > 2) ? secant(1) : s0;
      double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
      if (d * s0 <= 0.0) d = 0.0;
      else if (std::abs(d) > 3.0 * std::abs(s0)) d = 3.0 * s0;
      return d;
    }
    if (k == n - 1) {
      const double h1 = xs[n - 1] - xs[n - 2];
      const double h0 = (n > 2) ? xs[n - 2] - xs[n - 3] : h1;
      const double s1 = secant(n - 2), s0 = (n > 2) ? secant(n - 3) : s1;
      double d = ((2.0 * h1 + h0) * s1 - h1 * s0) / (h0 + h1);
      if (d * s1 <= 0.0) d = 0.0;
      else if (std::abs(d) > 3.0 * std::abs(s1)) d = 3.0 * s1;
      return d;
    }
    return fc_slope(xs[k] - xs[k - 1], xs[k + 1] - xs[k], secant(k - 1), secant(k));
  };

  const double h = xs[i + 1] - xs[i];
  const double u = (x - xs[i]) / h;
  const double d0 = slope(i), d1 = slope(i + 1);
  const double y0 = ys[i], y1 = ys[i + 1];
  const double u2 = u * u, u3 = u2 * u;
  return y0 * (2 * u3 - 3 * u2 + 1) + y1 * (3 * u2 - 2 * u3) +
         h * (d0 * (u3 - 2 * u2 + u) + d1 * (u3 - u2));
}

}  // namespace

void MediumParams::validate() const {
  if (!finite(g_root_n) || g_root_n <= 0.0)
    throw config_error(detail::msgf("g_root_n must be positive and finite, got %g", g_root_n));
  if (!finite(gamma_ab) || gamma_ab < 0.0)
    throw config_error(detail::msgf("gamma_ab must be non-negative, got %g", gamma_ab));
  if (!finite(gamma_bc) || gamma_bc < 0.0)
    throw config_error(detail::msgf("gamma_bc must be non-negative, got %g", gamma_bc));
  if (!finite(c) || c <= 0.0)
    throw config_error(detail::msgf("c must be positive and finite, got %g", c));
}

void ControlSchedule::validate() const {
  if (const auto* k = std::get_if<Constant>(&shape)) {
    if (!finite(k->omega) || k->omega < 0.0)
      throw config_error(detail::msgf("constant omega must be non-negative, got %g", k->omega));
  } else if (const auto* p = std::get_if<TanhPair>(&shape)) {
    if (!finite(p->amplitude) || p->amplitude < 0.0)
      throw config_error("tanh-pair amplitude must be non-negative");
    if (!finite(p->sharpness) || p->sharpness <= 0.0)
      throw config_error("tanh-pair sharpness must be positive");
    if (!finite(p->t_off) || !finite(p->t_on))
      throw config_error("tanh-pair switch times must be finite");
  } else if (const auto* s = std::get_if<Sampled>(&shape)) {
    if (s->t.size() != s->omega.size())
      throw config_error("sampled schedule: time/omega arrays differ in length");
    if (s->t.size() < 2)
      throw config_error("sampled schedule needs at least two samples");
    for (std::size_t i = 0; i < s->t.size(); ++i) {
      if (!finite(s->t[i]) || !finite(s->omega[i]) || s->omega[i] < 0.0)
        throw config_error(detail::msgf("sampled schedule: bad sample at index %zu", i));
      if (i > 0 && s->t[i] <= s->t[i - 1])
        throw config_error(detail::msgf("sampled schedule: times not strictly increasing at index %zu", i));
    }
  }
}

bool ControlSchedule::is_constant() const {
  return std::holds_alternative<Constant>(shape);
}

double omega_at(const ControlSchedule& schedule, const MediumParams& medium,
                double t) {
  if (const auto* k = std::get_if<ControlSchedule::Constant>(&schedule.shape))
    return k->omega;
  if (const auto* p = std::get_if<ControlSchedule::TanhPair>(&schedule.shape)) {
    const double cot = p->amplitude * (1.0 - 0.5 * std::tanh(p->sharpness * (t - p->t_off))
                                           + 0.5 * std::tanh(p->sharpness * (t - p->t_on)));
    return medium.g_root_n * std::max(cot, 0.0);
  }
  const auto& s = std::get<ControlSchedule::Sampled>(schedule.shape);
  if (t < s.t.front() || t > s.t.back())
    throw config_error(detail::msgf(
        "sampled schedule queried at t=%g outside [%g, %g]", t, s.t.front(), s.t.back()));
  return std::max(pchip_eval(s.t, s.omega, t), 0.0);
}

double mixing_angle(double omega, const MediumParams& medium) {
  if (!finite(omega) || omega < 0.0)
    throw config_error(detail::msgf("mixing_angle: omega must be non-negative, got %g", omega));
  return std::atan2(medium.g_root_n, omega);
}

double group_velocity(double omega, const MediumParams& medium) {
  if (!finite(omega) || omega < 0.0)
    throw config_error(detail::msgf("group_velocity: omega must be non-negative, got %g", omega));
  const double w2 = omega * omega;
  const double gn2 = medium.g_root_n * medium.g_root_n;
  return medium.c * w2 / (w2 + gn2);
}

void Grid::validate() const {
  if (!finite(z_min) || !finite(z_max) || z_max <= z_min)
    throw config_error("grid: need finite z_max > z_min");
  if (!finite(t_min) || !finite(t_max) || t_max <= t_min)
    throw config_error("grid: need finite t_max > t_min");
  if (n_z < 2) throw config_error("grid: n_z must be at least 2");
  if (n_t < 1) throw config_error("grid: n_t must be at least 1");
}

}  // namespace polsim
