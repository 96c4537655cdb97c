#include "polsim/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

#include "detail/msg.hpp"
#include "polsim/errors.hpp"
#include "polsim/interpolate.hpp"

namespace polsim {

namespace {

// State of all three components split into real/imaginary planes; the
// local step is written over plain double arrays so the compiler can
// vectorize across grid points.
struct Planes {
  std::vector<double> Er, Ei, Ar, Ai, Sr, Si;

  explicit Planes(const FieldState& s) {
    const std::size_t n = s.size();
    Er.resize(n); Ei.resize(n); Ar.resize(n); Ai.resize(n); Sr.resize(n); Si.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      Er[i] = s.E[i].real();   Ei[i] = s.E[i].imag();
      Ar[i] = s.S_a[i].real(); Ai[i] = s.S_a[i].imag();
      Sr[i] = s.S[i].real();   Si[i] = s.S[i].imag();
    }
  }

  FieldState snapshot(double z0, double dz, double t) const {
    FieldState s;
    s.z0 = z0; s.dz = dz; s.t = t;
    const std::size_t n = Er.size();
    s.E.resize(n); s.S_a.resize(n); s.S.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      s.E[i] = {Er[i], Ei[i]};
      s.S_a[i] = {Ar[i], Ai[i]};
      s.S[i] = {Sr[i], Si[i]};
    }
    return s;
  }
};

// One classical RK4 step of length h for the local system at every grid
// point, with the control sampled at the stage times (w1; w2 for the two
// midpoint stages; w4).
void rk4_local(Planes& p, double h, double a, double ga, double gb, double w1,
               double w2, double w4) {
  const std::size_t n = p.Er.size();
  double* __restrict Er = p.Er.data();
  double* __restrict Ei = p.Ei.data();
  double* __restrict Ar = p.Ar.data();
  double* __restrict Ai = p.Ai.data();
  double* __restrict Sr = p.Sr.data();
  double* __restrict Si = p.Si.data();
  const double h2 = 0.5 * h, h6 = h / 6.0;

#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) {
    const double er = Er[i], ei = Ei[i], ar = Ar[i], ai = Ai[i], sr = Sr[i], si = Si[i];

    const double k1er = -a * ai,                      k1ei = a * ar;
    const double k1ar = -ga * ar - a * ei - w1 * si,  k1ai = -ga * ai + a * er + w1 * sr;
    const double k1sr = -gb * sr - w1 * ai,           k1si = -gb * si + w1 * ar;

    double ter = er + h2 * k1er, tei = ei + h2 * k1ei;
    double tar = ar + h2 * k1ar, tai = ai + h2 * k1ai;
    double tsr = sr + h2 * k1sr, tsi = si + h2 * k1si;
    const double k2er = -a * tai,                      k2ei = a * tar;
    const double k2ar = -ga * tar - a * tei - w2 * tsi, k2ai = -ga * tai + a * ter + w2 * tsr;
    const double k2sr = -gb * tsr - w2 * tai,           k2si = -gb * tsi + w2 * tar;

    ter = er + h2 * k2er; tei = ei + h2 * k2ei;
    tar = ar + h2 * k2ar; tai = ai + h2 * k2ai;
    tsr = sr + h2 * k2sr; tsi = si + h2 * k2si;
    const double k3er = -a * tai,                      k3ei = a * tar;
    const double k3ar = -ga * tar - a * tei - w2 * tsi, k3ai = -ga * tai + a * ter + w2 * tsr;
    const double k3sr = -gb * tsr - w2 * tai,           k3si = -gb * tsi + w2 * tar;

    ter = er + h * k3er; tei = ei + h * k3ei;
    tar = ar + h * k3ar; tai = ai + h * k3ai;
    tsr = sr + h * k3sr; tsi = si + h * k3si;
    const double k4er = -a * tai,                      k4ei = a * tar;
    const double k4ar = -ga * tar - a * tei - w4 * tsi, k4ai = -ga * tai + a * ter + w4 * tsr;
    const double k4sr = -gb * tsr - w4 * tai,           k4si = -gb * tsi + w4 * tar;

    Er[i] = er + h6 * (k1er + 2.0 * (k2er + k3er) + k4er);
    Ei[i] = ei + h6 * (k1ei + 2.0 * (k2ei + k3ei) + k4ei);
    Ar[i] = ar + h6 * (k1ar + 2.0 * (k2ar + k3ar) + k4ar);
    Ai[i] = ai + h6 * (k1ai + 2.0 * (k2ai + k3ai) + k4ai);
    Sr[i] = sr + h6 * (k1sr + 2.0 * (k2sr + k3sr) + k4sr);
    Si[i] = si + h6 * (k1si + 2.0 * (k2si + k3si) + k4si);
  }
}

// Same step with per-point control values (retarded schedules).
void rk4_local_retarded(Planes& p, double h, double a, double ga, double gb,
                        const double* __restrict w1, const double* __restrict w2,
                        const double* __restrict w4) {
  const std::size_t n = p.Er.size();
  double* __restrict Er = p.Er.data();
  double* __restrict Ei = p.Ei.data();
  double* __restrict Ar = p.Ar.data();
  double* __restrict Ai = p.Ai.data();
  double* __restrict Sr = p.Sr.data();
  double* __restrict Si = p.Si.data();
  const double h2 = 0.5 * h, h6 = h / 6.0;

#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) {
    const double er = Er[i], ei = Ei[i], ar = Ar[i], ai = Ai[i], sr = Sr[i], si = Si[i];
    const double u1 = w1[i], u2 = w2[i], u4 = w4[i];

    const double k1er = -a * ai,                      k1ei = a * ar;
    const double k1ar = -ga * ar - a * ei - u1 * si,  k1ai = -ga * ai + a * er + u1 * sr;
    const double k1sr = -gb * sr - u1 * ai,           k1si = -gb * si + u1 * ar;

    double ter = er + h2 * k1er, tei = ei + h2 * k1ei;
    double tar = ar + h2 * k1ar, tai = ai + h2 * k1ai;
    double tsr = sr + h2 * k1sr, tsi = si + h2 * k1si;
    const double k2er = -a * tai,                      k2ei = a * tar;
    const double k2ar = -ga * tar - a * tei - u2 * tsi, k2ai = -ga * tai + a * ter + u2 * tsr;
    const double k2sr = -gb * tsr - u2 * tai,           k2si = -gb * tsi + u2 * tar;

    ter = er + h2 * k2er; tei = ei + h2 * k2ei;
    tar = ar + h2 * k2ar; tai = ai + h2 * k2ai;
    tsr = sr + h2 * k2sr; tsi = si + h2 * k2si;
    const double k3er = -a * tai,                      k3ei = a * tar;
    const double k3ar = -ga * tar - a * tei - u2 * tsi, k3ai = -ga * tai + a * ter + u2 * tsr;
    const double k3sr = -gb * tsr - u2 * tai,           k3si = -gb * tsi + u2 * tar;

    ter = er + h * k3er; tei = ei + h * k3ei;
    tar = ar + h * k3ar; tai = ai + h * k3ai;
    tsr = sr + h * k3sr; tsi = si + h * k3si;
    const double k4er = -a * tai,                      k4ei = a * tar;
    const double k4ar = -ga * tar - a * tei - u4 * tsi, k4ai = -ga * tai + a * ter + u4 * tsr;
    const double k4sr = -gb * tsr - u4 * tai,           k4si = -gb * tsi + u4 * tar;

    Er[i] = er + h6 * (k1er + 2.0 * (k2er + k3er) + k4er);
    Ei[i] = ei + h6 * (k1ei + 2.0 * (k2ei + k3ei) + k4ei);
    Ar[i] = ar + h6 * (k1ar + 2.0 * (k2ar + k3ar) + k4ar);
    Ai[i] = ai + h6 * (k1ai + 2.0 * (k2ai + k3ai) + k4ai);
    Sr[i] = sr + h6 * (k1sr + 2.0 * (k2sr + k3sr) + k4sr);
    Si[i] = si + h6 * (k1si + 2.0 * (k2si + k3si) + k4si);
  }
}

// Exponential midpoint: exact propagator of the local system with the
// control frozen at the interval midpoint.  Unconditionally stable.
void expm_local(Planes& p, double h, double a, double ga, double gb, double wmid) {
  using cd = std::complex<double>;
  Eigen::Matrix3cd m;
  const cd I{0.0, 1.0};
  m << cd{0, 0}, I * a, cd{0, 0},
       I * a, cd{-ga, 0}, I * wmid,
       cd{0, 0}, I * wmid, cd{-gb, 0};
  const Eigen::Matrix3cd u = (h * m).exp();

  const std::size_t n = p.Er.size();
  double ur[3][3], ui[3][3];
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      ur[r][c] = u(r, c).real();
      ui[r][c] = u(r, c).imag();
    }
  double* __restrict Er = p.Er.data();
  double* __restrict Ei = p.Ei.data();
  double* __restrict Ar = p.Ar.data();
  double* __restrict Ai = p.Ai.data();
  double* __restrict Sr = p.Sr.data();
  double* __restrict Si = p.Si.data();
#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) {
    const double er = Er[i], ei = Ei[i], ar = Ar[i], ai = Ai[i], sr = Sr[i], si = Si[i];
    Er[i] = ur[0][0] * er - ui[0][0] * ei + ur[0][1] * ar - ui[0][1] * ai + ur[0][2] * sr - ui[0][2] * si;
    Ei[i] = ur[0][0] * ei + ui[0][0] * er + ur[0][1] * ai + ui[0][1] * ar + ur[0][2] * si + ui[0][2] * sr;
    Ar[i] = ur[1][0] * er - ui[1][0] * ei + ur[1][1] * ar - ui[1][1] * ai + ur[1][2] * sr - ui[1][2] * si;
    Ai[i] = ur[1][0] * ei + ui[1][0] * er + ur[1][1] * ai + ui[1][1] * ar + ur[1][2] * si + ui[1][2] * sr;
    Sr[i] = ur[2][0] * er - ui[2][0] * ei + ur[2][1] * ar - ui[2][1] * ai + ur[2][2] * sr - ui[2][2] * si;
    Si[i] = ur[2][0] * ei + ui[2][0] * er + ur[2][1] * ai + ui[2][1] * ar + ur[2][2] * si + ui[2][2] * sr;
  }
}

double quadratic_peak(const std::vector<double>& y, std::size_t i) {
  const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
  if (denom >= 0.0) return 0.0;
  const double d = 0.5 * (y[i - 1] - y[i + 1]) / denom;
  return std::clamp(d, -0.5, 0.5);
}

}  // namespace

void Scenario::validate() const {
  medium.validate();
  schedule.validate();
  grid.validate();
  initial.validate();
  if (initial.size() != grid.n_z)
    throw config_error(detail::msgf("scenario: initial state has %zu samples, grid expects %zu",
                                     initial.size(), grid.n_z));
  if (std::abs(initial.dz - grid.dz()) > 1e-9 * grid.dz() ||
      std::abs(initial.z0 - grid.z_min) > 1e-6 * grid.dz())
    throw config_error("scenario: initial state grid does not match the scenario grid");
  if (std::abs(initial.t - grid.t_min) > 1e-9 * std::max(1.0, std::abs(grid.t_min)))
    throw config_error("scenario: initial state time does not match t_min");
  if (std::abs(medium.c * grid.dt() - grid.dz()) > 1e-9 * grid.dz())
    throw config_error(detail::msgf(
        "scenario: grid must satisfy dz = c dt for exact advection (dz=%g, c dt=%g)",
        grid.dz(), medium.c * grid.dt()));
  if (record_every < 1) throw config_error("scenario: record_every must be >= 1");

  double max_e = 0.0;
  for (const auto& v : initial.E) max_e = std::max(max_e, std::abs(v));
  if (max_e > 0.0 && !allow_strong_probe) {
    const double omega0 = omega_at(schedule, medium, grid.t_min);
    const double ratio = (omega0 > 0.0) ? max_e * medium.g_root_n / omega0
                                        : std::numeric_limits<double>::infinity();
    if (!(ratio < 0.1))
      throw config_error(detail::msgf(
          "scenario: weak-probe bound violated (max|E| g√N / Omega = %.3g); "
          "set allow_strong_probe to override", ratio));
  }
}

Trajectory integrate(const Scenario& sc) {
  sc.validate();
  const Grid& g = sc.grid;
  const double dt = g.dt(), dz = g.dz(), h = 0.5 * dt;
  const double a = sc.medium.g_root_n, ga = sc.medium.gamma_ab, gb = sc.medium.gamma_bc;
  const std::size_t n = g.n_z;
  const bool retarded = sc.schedule.retarded;

  Planes p(sc.initial);
  std::vector<double> w1, w2, w4;  // per-point controls, retarded path only
  if (retarded) {
    w1.resize(n);
    w2.resize(n);
    w4.resize(n);
  }

  Trajectory traj;
  double transmitted = 0.0;

  auto record = [&](std::size_t step) {
    FieldState snap = p.snapshot(g.z_min, dz, g.t(step));
    TrajectoryRecord rec;
    rec.t = snap.t;
    rec.field_norm2 = trapezoid_norm2(snap.E, dz);
    rec.optical_norm2 = trapezoid_norm2(snap.S_a, dz);
    rec.spin_norm2 = trapezoid_norm2(snap.S, dz);
    rec.excitation = rec.field_norm2 + rec.optical_norm2 + rec.spin_norm2;
    rec.transmitted = transmitted;
    if (retarded) {
      std::vector<double> th(n);
      for (std::size_t i = 0; i < n; ++i)
        th[i] = mixing_angle(omega_at(sc.schedule, sc.medium, rec.t - snap.z(i) / sc.medium.c),
                             sc.medium);
      rec.polariton_norm2 = polariton_norm(to_polariton(snap, th));
    } else {
      rec.polariton_norm2 = polariton_norm(
          to_polariton(snap, mixing_angle(omega_at(sc.schedule, sc.medium, rec.t), sc.medium)));
    }
    std::vector<double> inten(n);
    double peak = 0.0;
    std::size_t ipk = 0;
    for (std::size_t i = 0; i < n; ++i) {
      inten[i] = std::norm(snap.E[i]);
      if (inten[i] > peak) {
        peak = inten[i];
        ipk = i;
      }
    }
    rec.peak_z = (peak > 1e-280 && ipk > 0 && ipk + 1 < n)
                     ? g.z(ipk) + quadratic_peak(inten, ipk) * dz
                     : std::numeric_limits<double>::quiet_NaN();
    if (!std::isfinite(rec.excitation))
      throw numerical_error(detail::msgf(
          "integrate: state turned non-finite by t=%g (instability or parameter blow-up)", rec.t));
    traj.records.push_back(rec);
    traj.snapshots.push_back(std::move(snap));
  };

  record(0);
  for (std::size_t step = 0; step < g.n_t; ++step) {
    const double t = g.t(step);
    if (!retarded) {
      const double wa1 = omega_at(sc.schedule, sc.medium, t);
      const double wa2 = omega_at(sc.schedule, sc.medium, t + 0.25 * dt);
      const double wa4 = omega_at(sc.schedule, sc.medium, t + 0.5 * dt);
      if (sc.stepper == Scenario::Stepper::rk4)
        rk4_local(p, h, a, ga, gb, wa1, wa2, wa4);
      else
        expm_local(p, h, a, ga, gb, wa2);

      transmitted += (p.Er[n - 1] * p.Er[n - 1] + p.Ei[n - 1] * p.Ei[n - 1]) * dz;
      std::memmove(p.Er.data() + 1, p.Er.data(), (n - 1) * sizeof(double));
      std::memmove(p.Ei.data() + 1, p.Ei.data(), (n - 1) * sizeof(double));
      p.Er[0] = p.Ei[0] = 0.0;

      const double wb1 = wa4;
      const double wb2 = omega_at(sc.schedule, sc.medium, t + 0.75 * dt);
      const double wb4 = omega_at(sc.schedule, sc.medium, t + dt);
      if (sc.stepper == Scenario::Stepper::rk4)
        rk4_local(p, h, a, ga, gb, wb1, wb2, wb4);
      else
        expm_local(p, h, a, ga, gb, wb2);
    } else {
      if (sc.stepper != Scenario::Stepper::rk4)
        throw config_error("integrate: the exponential stepper supports only non-retarded schedules");
      auto fill = [&](std::vector<double>& w, double tau) {
        for (std::size_t i = 0; i < n; ++i)
          w[i] = omega_at(sc.schedule, sc.medium, tau - g.z(i) / sc.medium.c);
      };
      fill(w1, t);
      fill(w2, t + 0.25 * dt);
      fill(w4, t + 0.5 * dt);
      rk4_local_retarded(p, h, a, ga, gb, w1.data(), w2.data(), w4.data());

      transmitted += (p.Er[n - 1] * p.Er[n - 1] + p.Ei[n - 1] * p.Ei[n - 1]) * dz;
      std::memmove(p.Er.data() + 1, p.Er.data(), (n - 1) * sizeof(double));
      std::memmove(p.Ei.data() + 1, p.Ei.data(), (n - 1) * sizeof(double));
      p.Er[0] = p.Ei[0] = 0.0;

      fill(w1, t + 0.5 * dt);
      fill(w2, t + 0.75 * dt);
      fill(w4, t + dt);
      rk4_local_retarded(p, h, a, ga, gb, w1.data(), w2.data(), w4.data());
    }

    if ((step + 1) % sc.record_every == 0 || step + 1 == g.n_t) record(step + 1);
  }
  return traj;
}

FieldState make_adiabatic_state(const PolaritonProfile& psi0,
                                const ControlSchedule& schedule,
                                const MediumParams& medium, bool first_order) {
  medium.validate();
  schedule.validate();
  if (psi0.size() < 4) throw config_error("make_adiabatic_state: profile too short");

  FieldState s;
  s.z0 = psi0.z0;
  s.dz = psi0.dz;
  s.t = psi0.t;
  const std::size_t n = psi0.size();
  s.E.resize(n);
  s.S.resize(n);
  s.S_a.assign(n, cplx{0.0, 0.0});

  if (schedule.retarded) {
    for (std::size_t i = 0; i < n; ++i) {
      const double th = mixing_angle(
          omega_at(schedule, medium, psi0.t - psi0.z(i) / medium.c), medium);
      s.E[i] = std::cos(th) * psi0.psi[i];
      s.S[i] = -std::sin(th) * psi0.psi[i];
    }
    return s;
  }

  const double th = mixing_angle(omega_at(schedule, medium, psi0.t), medium);
  const double ct = std::cos(th), st = std::sin(th);
  for (std::size_t i = 0; i < n; ++i) {
    s.E[i] = ct * psi0.psi[i];
    s.S[i] = -st * psi0.psi[i];
  }
  if (first_order) {
    // rigid motion at v_g puts S_a = -i (c/g√N) sin^2(th) cos(th) dpsi/dz,
    // finite for every mixing angle including a switched-off control
    std::vector<double> x(n), re(n), im(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = psi0.z(i);
      re[i] = psi0.psi[i].real();
      im[i] = psi0.psi[i].imag();
    }
    const CubicSpline sre(x, re), sim(x, im);
    const double coef = medium.c / medium.g_root_n * st * st * ct;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx dpsi{sre.derivative(x[i]), sim.derivative(x[i])};
      s.S_a[i] = cplx{0.0, -1.0} * coef * dpsi;
    }
  }
  return s;
}

VelocityFit measure_peak_velocity(const Trajectory& traj, double t_start,
                                  double t_end) {
  std::vector<double> ts, zs;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const auto& snap = traj.snapshots[k];
    if (snap.t < t_start || snap.t > t_end) continue;
    const std::size_t n = snap.size();
    std::vector<double> inten(n);
    double peak = 0.0;
    std::size_t ipk = 0;
    for (std::size_t i = 0; i < n; ++i) {
      inten[i] = std::norm(snap.E[i]);
      if (inten[i] > peak) {
        peak = inten[i];
        ipk = i;
      }
    }
    if (peak < 1e-280) continue;  // field dark in this snapshot
    if (ipk < 2 || ipk + 2 >= n)
      throw domain_overflow(detail::msgf(
          "measure_peak_velocity: |E|^2 peak at the grid edge at t=%g", snap.t));
    ts.push_back(snap.t);
    zs.push_back(snap.z(ipk) + quadratic_peak(inten, ipk) * snap.dz);
  }
  if (ts.size() < 2)
    throw config_error("measure_peak_velocity: need at least two lit snapshots in the window");

  const double nn = double(ts.size());
  double st = 0, sz = 0, stt = 0, stz = 0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    st += ts[k];
    sz += zs[k];
    stt += ts[k] * ts[k];
    stz += ts[k] * zs[k];
  }
  const double denom = nn * stt - st * st;
  if (std::abs(denom) < 1e-30)
    throw config_error("measure_peak_velocity: degenerate time window");
  VelocityFit fit;
  fit.velocity = (nn * stz - st * sz) / denom;
  fit.intercept = (sz - fit.velocity * st) / nn;
  fit.points = ts.size();
  return fit;
}

FidelityReport storage_retrieval_fidelity(const FieldState& input,
                                          const FieldState& output) {
  input.validate();
  output.validate();
  if (std::abs(input.dz - output.dz) > 1e-9 * input.dz)
    throw config_error("storage_retrieval_fidelity: grid spacings differ");

  const double n_in = trapezoid_norm2(input.E, input.dz);
  const double n_out = trapezoid_norm2(output.E, output.dz);
  if (n_in < 1e-300 || n_out < 1e-300)
    throw config_error("storage_retrieval_fidelity: a field profile has zero norm");

  auto centroid = [](const FieldState& s) {
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double w = (i == 0 || i + 1 == s.size()) ? 0.5 : 1.0;
      const double y = w * std::norm(s.E[i]);
      m0 += y;
      m1 += y * s.z(i);
    }
    return m1 / m0;
  };
  const double shift = centroid(output) - centroid(input);

  const ProfileInterpolant interp(output.E, output.z0, output.dz);
  cplx overlap{0.0, 0.0};
  double n_aligned = 0.0;
  for (std::size_t i = 0; i < input.size(); ++i) {
    const double w = (i == 0 || i + 1 == input.size()) ? 0.5 : 1.0;
    const cplx v = interp(input.z(i) + shift);
    overlap += w * std::conj(input.E[i]) * v;
    n_aligned += w * std::norm(v);
  }
  overlap *= input.dz;
  n_aligned *= input.dz;
  if (n_aligned < 1e-300)
    throw config_error("storage_retrieval_fidelity: aligned output has zero norm on the input grid");

  FidelityReport rep;
  rep.fidelity = std::norm(overlap) / (n_in * n_aligned);
  rep.energy_ratio = n_out / n_in;
  rep.shift = shift;
  return rep;
}

}  // namespace polsim
