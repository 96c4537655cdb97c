// Acceptance gate: one test case per numbered criterion, each printing a
// single verdict line (plus measured margins) so the suite output reads as a
// scorecard.  Tolerances are stated inline next to each check.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "polsim/adiabatic.hpp"
#include "polsim/bloch.hpp"
#include "polsim/oracle.hpp"
#include "polsim/validity.hpp"

using namespace polsim;

namespace {

const double pi = std::acos(-1.0);

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void verdict(int n, bool ok, const char* what) {
  std::printf("ACCEPTANCE %d: %s - %s\n", n, ok ? "PASS" : "FAIL", what);
  std::fflush(stdout);
}

PolaritonProfile gauss(const Grid& g, double center, double width, double amp) {
  PolaritonProfile p;
  p.z0 = g.z_min;
  p.dz = g.dz();
  p.t = g.t_min;
  p.psi.resize(g.n_z);
  for (std::size_t i = 0; i < g.n_z; ++i) {
    const double x = (g.z(i) - center) / width;
    p.psi[i] = amp * std::exp(-x * x);
  }
  return p;
}

// The storage-cycle ground truth used by criteria 2 and 4: a pulse of
// half-width 10 rides in at theta ~ 0.1, is trapped by a symmetric tanh
// switch pair, and is released; only the optical decay rate varies.
struct CycleResult {
  FidelityReport report;
  double runtime = 0.0;
};

CycleResult storage_cycle(double gamma_ab) {
  MediumParams med;
  med.g_root_n = 100.0;
  med.gamma_ab = gamma_ab;
  ControlSchedule sch;
  const double cot01 = std::cos(0.1) / std::sin(0.1);
  sch.shape = ControlSchedule::TanhPair{cot01, 0.2, 12.0, 58.0};
  Grid g;
  g.z_min = -50;
  g.z_max = 50;
  g.n_z = 40001;
  g.t_min = 0;
  g.t_max = 70;
  g.n_t = 28000;  // c dt = dz and |lambda| dt / 2 = 1.24, inside the rk4 disc

  Scenario sc;
  sc.medium = med;
  sc.schedule = sch;
  sc.grid = g;
  sc.initial = make_adiabatic_state(gauss(g, -15.0, 10.0, 1e-4), sch, med, true);
  sc.record_every = g.n_t;  // keep only the end states
  sc.validate();

  const auto t0 = std::chrono::steady_clock::now();
  const Trajectory traj = integrate(sc);
  CycleResult r;
  r.runtime = seconds_since(t0);
  r.report =
      storage_retrieval_fidelity(traj.snapshots.front(), traj.snapshots.back());
  return r;
}

}  // namespace

TEST_CASE("criterion 1: ramp-figure transport against the analytic translation") {
  const auto t0 = std::chrono::steady_clock::now();
  MediumParams med;
  med.g_root_n = 1.0;
  ControlSchedule sch;
  sch.shape = ControlSchedule::TanhPair{100.0, 0.1, 15.0, 125.0};
  Grid g;  // defaults: z in [-60, 360], 2101 points, t in [0, 200]

  const auto psi0 = gauss(g, 0.0, 10.0, 1.0);
  std::vector<double> times;
  for (int k = 0; k <= 200; ++k) times.push_back(double(k));
  const auto out = transport(psi0, sch, med, times);

  double worst_l2 = 0.0;
  for (std::size_t m = 0; m < out.size(); ++m) {
    const double d = displacement(sch, med, 0.0, times[m]);
    double err2 = 0.0, ref2 = 0.0;
    for (std::size_t i = 0; i < out[m].size(); ++i) {
      const double x = (out[m].z(i) - d) / 10.0;
      const double exact = std::exp(-x * x);
      err2 += std::norm(out[m].psi[i] - exact);
      ref2 += exact * exact;
    }
    worst_l2 = std::max(worst_l2, std::sqrt(err2 / ref2));
  }
  const bool l2_ok = worst_l2 < 1e-6;
  CHECK(worst_l2 < 1e-6);

  // plateau bounds as stated: reconstructed E below 1e-3 of the initial
  // peak and displacement rate below 1e-5 c, everywhere in t in [40, 100]
  const double th0 = mixing_angle(omega_at(sch, med, 0.0), med);
  double e_peak0 = 0.0;
  for (const auto& v : from_polariton(psi0, th0, med).E)
    e_peak0 = std::max(e_peak0, std::abs(v));
  double worst_e = 0.0, worst_rate = 0.0;
  for (std::size_t m = 0; m < out.size(); ++m) {
    if (times[m] < 40.0 || times[m] > 100.0) continue;
    const double th = mixing_angle(omega_at(sch, med, times[m]), med);
    const FieldState fs = from_polariton(out[m], th, med);
    for (const auto& v : fs.E)
      worst_e = std::max(worst_e, std::abs(v) / e_peak0);
    if (m > 0 && times[m - 1] >= 40.0) {
      const double rate = (displacement(sch, med, 0.0, times[m]) -
                           displacement(sch, med, 0.0, times[m - 1])) /
                          (times[m] - times[m - 1]);
      worst_rate = std::max(worst_rate, rate / med.c);
    }
  }
  const bool e_ok = worst_e < 1e-3;
  const bool rate_ok = worst_rate < 1e-5;
  // both bounds sit below what the pinned schedule can reach at the plateau
  // edges: cos(theta) only falls to 3.34e-3 at the plateau center, so the
  // amplitude floor is 3.3x above the stated bound and the edge velocity
  // ~2.2e-3 c is 220x above it.  Kept as stated; the margins are printed.
  CHECK(worst_e < 1e-3);
  CHECK(worst_rate < 1e-5);

  const double runtime = seconds_since(t0);
  const bool time_ok = runtime < 10.0;
  CHECK(runtime < 10.0);

  std::printf("  transport max rel L2     %.3e  (< 1e-6)\n", worst_l2);
  std::printf("  plateau max |E|/peak     %.3e  (< 1e-3 as stated; floor at "
              "plateau center cos theta(70) = 3.340e-3)\n", worst_e);
  std::printf("  plateau max v/c          %.3e  (< 1e-5 as stated; floor at "
              "plateau center cos^2 theta(70) = 1.116e-5)\n", worst_rate);
  std::printf("  runtime                  %.2f s (< 10 s)\n", runtime);
  verdict(1, l2_ok && e_ok && rate_ok && time_ok,
          "figure transport: translation exact, plateau bounds as stated");
}

TEST_CASE("criterion 2: storage cycle ground truth at figure 1e5") {
  const auto r = storage_cycle(1.0);
  const bool ok = r.report.fidelity > 0.99 && r.report.energy_ratio > 0.98 &&
                  r.runtime < 120.0;
  CHECK(r.report.fidelity > 0.99);
  CHECK(r.report.energy_ratio > 0.98);
  CHECK(r.runtime < 120.0);
  std::printf("  fidelity      %.8f  (> 0.99)\n", r.report.fidelity);
  std::printf("  energy ratio  %.6f    (> 0.98)\n", r.report.energy_ratio);
  std::printf("  runtime       %.1f s     (< 120 s)\n", r.runtime);
  verdict(2, ok, "full integration stores and retrieves the pulse");
}

TEST_CASE("criterion 3: group velocity at g^2 N / Omega^2 = 3") {
  MediumParams med;
  med.g_root_n = 2.0;
  ControlSchedule sch;
  sch.shape = ControlSchedule::Constant{2.0 / std::sqrt(3.0)};
  Grid g;
  g.z_min = -20;
  g.z_max = 40;
  g.n_z = 1201;
  g.t_min = 0;
  g.t_max = 60;
  g.n_t = 1200;
  Scenario sc;
  sc.medium = med;
  sc.schedule = sch;
  sc.grid = g;
  sc.initial = make_adiabatic_state(gauss(g, -5.0, 5.0, 1e-3), sch, med, true);
  sc.record_every = 20;
  sc.validate();
  const auto traj = integrate(sc);
  const auto fit = measure_peak_velocity(traj, 10.0, 50.0);

  const double rel_err = std::abs(fit.velocity - 0.25) / 0.25;
  const bool ok = rel_err < 0.02;
  CHECK(rel_err < 0.02);
  std::printf("  measured peak velocity  %.6f c  (0.25 c +- 2%%)\n",
              fit.velocity);
  verdict(3, ok, "quarter-speed propagation at the predicted mixing angle");
}

TEST_CASE("criterion 4: fidelity deficit scales with the adiabaticity figure") {
  // recovered fraction of the input pulse (overlap normalized by the input
  // alone): invariant-shape attenuation is exactly what the loss model
  // predicts, so this is the quantity whose deficit tracks the figure
  std::vector<double> deficits;
  std::vector<double> figures{1e2, 1e3, 1e4, 1e5};
  for (const double gamma_ab : {1000.0, 100.0, 10.0, 1.0}) {
    const auto r = storage_cycle(gamma_ab);
    deficits.push_back(1.0 - r.report.fidelity * r.report.energy_ratio);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < deficits.size(); ++i)
    monotone = monotone && deficits[i] < deficits[i - 1];
  const double decade_a = deficits[1] / deficits[2];
  const double decade_b = deficits[2] / deficits[3];
  const bool ok = monotone && decade_a >= 5.0 && decade_b >= 5.0;
  CHECK(monotone);
  CHECK(decade_a >= 5.0);
  CHECK(decade_b >= 5.0);
  for (std::size_t i = 0; i < deficits.size(); ++i)
    std::printf("  figure %.0e: deficit %.4e\n", figures[i], deficits[i]);
  std::printf("  per-decade improvement  %.1fx, %.1fx  (>= 5x)\n", decade_a,
              decade_b);
  verdict(4, ok, "deficit falls monotonically, >= 5x per decade at the top");
}

TEST_CASE("criterion 5: halving the pulse length quadruples the decay deficit") {
  MediumParams med;
  med.g_root_n = 10.0;
  med.gamma_ab = 5.0;
  ControlSchedule sch;
  sch.shape = ControlSchedule::Constant{10.0};
  double deficit[2] = {0.0, 0.0};
  int k = 0;
  for (const double width : {10.0, 5.0}) {
    Grid g;
    g.z_min = -60;
    g.z_max = 60;
    g.n_z = 2401;
    g.t_min = 0;
    g.t_max = 80;  // distance 40 at v_g = c/2
    g.n_t = 1600;
    Scenario sc;
    sc.medium = med;
    sc.schedule = sch;
    sc.grid = g;
    sc.initial = make_adiabatic_state(gauss(g, -20.0, width, 1e-3), sch, med, true);
    sc.record_every = g.n_t;
    sc.validate();
    const auto traj = integrate(sc);
    const auto rep = storage_retrieval_fidelity(traj.snapshots.front(),
                                                traj.snapshots.back());
    deficit[k++] = 1.0 - rep.energy_ratio;
  }
  const double ratio = deficit[1] / deficit[0];
  const bool ok = ratio > 3.2 && ratio < 4.8;
  CHECK(ratio > 3.2);
  CHECK(ratio < 4.8);
  std::printf("  deficit at width 10  %.4e\n", deficit[0]);
  std::printf("  deficit at width 5   %.4e\n", deficit[1]);
  std::printf("  ratio                %.3f  (4 +- 20%%)\n", ratio);
  verdict(5, ok, "decay deficit follows the quadratic pulse-length law");
}

TEST_CASE("criterion 6: few-atom oracle exactness and transfer fidelities") {
  const auto t0 = std::chrono::steady_clock::now();

  double worst_residual = 0.0, worst_comm = 0.0;
  for (int atoms : {2, 3, 4, 5})
    for (int n : {1, 2})
      for (double th : {0.0, pi / 6, pi / 4, pi / 3, pi / 2}) {
        SystemSpec s;
        s.n_atoms = atoms;
        s.n_max = 2;
        if (n > std::min(atoms, s.n_max)) continue;
        const double omega = control_for_angle(s, th);
        // theta = 0 is realized by a large-but-finite control, so the state
        // is built at the angle that control actually produces (~1e-30)
        const double th_real = std::atan2(s.g_collective(), omega);
        worst_residual =
            std::max(worst_residual, dark_residual(s, th_real, n, omega));
        worst_comm =
            std::max(worst_comm, std::abs(commutator_expectation(s, th) - 1.0));
      }
  const bool residual_ok = worst_residual < 1e-12;
  const bool comm_ok = worst_comm < 1e-12;
  CHECK(worst_residual < 1e-12);
  CHECK(worst_comm < 1e-12);

  // adiabatic mapping: half-cosine turn-off from Omega = 10 g sqrt(N) over
  // 200 / g sqrt(N) (slow), 0.2 / g sqrt(N) (fast), and a down-up round trip
  SystemSpec s;
  s.n_atoms = 4;
  s.n_max = 1;
  const double grn = s.g_collective();
  auto ramp = [&](double T, bool round_trip) {
    ControlSchedule::Sampled shape;
    const int m = round_trip ? 512 : 256;
    const double span = round_trip ? 2.0 * T : T;
    for (int k = 0; k <= m; ++k) {
      const double t = span * double(k) / double(m);
      const double u = round_trip ? std::min(t, span - t) / T : t / T;
      shape.t.push_back(t);
      shape.omega.push_back(10.0 * grn * 0.5 * (1.0 + std::cos(pi * u)));
    }
    ControlSchedule sch;
    sch.shape = std::move(shape);
    return sch;
  };
  // every ramp starts at Omega = 10 g sqrt(N), so the prepared state is the
  // same across legs
  const double th0 = mixing_angle(10.0 * grn, s.as_medium());
  const auto psi0 = dark_state(s, th0, 1);
  const auto run = [&](double T, bool round_trip) {
    s.schedule = ramp(T, round_trip);
    return evolve_transfer(s, psi0, 0.0, round_trip ? 2.0 * T : T, 100);
  };

  const auto slow = run(200.0 / grn, false);
  const auto fast = run(0.2 / grn, false);
  const auto rt = run(200.0 / grn, true);
  cplx overlap{0.0, 0.0};
  for (std::size_t i = 0; i < psi0.size(); ++i)
    overlap += std::conj(psi0.amp[i]) * rt.final_state.amp[i];
  const double rt_fidelity = std::norm(overlap);
  const double slow_fid = slow.trace.back().fidelity;
  const double fast_fid = fast.trace.back().fidelity;

  const bool slow_ok = slow_fid > 0.999;
  const bool rt_ok = rt_fidelity > 0.998;
  const bool fast_ok = fast_fid < slow_fid;
  CHECK(slow_fid > 0.999);
  CHECK(rt_fidelity > 0.998);
  CHECK(fast_fid < slow_fid);

  const double runtime = seconds_since(t0);
  const bool time_ok = runtime < 60.0;
  CHECK(runtime < 60.0);

  std::printf("  max dark residual      %.3e  (< 1e-12)\n", worst_residual);
  std::printf("  max |commutator - 1|   %.3e  (< 1e-12)\n", worst_comm);
  std::printf("  slow-ramp fidelity     %.6f    (> 0.999)\n", slow_fid);
  std::printf("  round-trip fidelity    %.6f    (> 0.998)\n", rt_fidelity);
  std::printf("  fast-ramp fidelity     %.6f    (< slow)\n", fast_fid);
  std::printf("  runtime                %.1f s      (< 60 s)\n", runtime);
  verdict(6, residual_ok && comm_ok && slow_ok && rt_ok && fast_ok && time_ok,
          "exact dark states, bosonic commutator, adiabatic transfer");
}

TEST_CASE("criterion 7: conservation suites") {
  // adiabatic transport: polariton norm to 1e-9 on a fine grid
  MediumParams med;
  med.g_root_n = 1.0;
  ControlSchedule sch;
  sch.shape = ControlSchedule::TanhPair{100.0, 0.1, 15.0, 125.0};
  Grid g;
  g.n_z = 4201;  // dz = 0.1
  const auto psi0 = gauss(g, 0.0, 10.0, 1.0);
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(10.0 * k);
  const auto out = transport(psi0, sch, med, times);
  const double n0 = polariton_norm(psi0);
  double worst_norm = 0.0;
  for (const auto& p : out)
    worst_norm = std::max(worst_norm, std::abs(polariton_norm(p) - n0) / n0);
  const bool norm_ok = worst_norm < 1e-9;
  CHECK(worst_norm < 1e-9);

  // lossless full integration: excitation functional to 1e-6
  MediumParams med2;
  med2.g_root_n = 2.0;
  ControlSchedule sch2;
  sch2.shape = ControlSchedule::Constant{2.0 / std::sqrt(3.0)};
  Grid g2;
  g2.z_min = -20;
  g2.z_max = 40;
  g2.n_z = 1201;
  g2.t_min = 0;
  g2.t_max = 60;
  g2.n_t = 1200;
  Scenario sc;
  sc.medium = med2;
  sc.schedule = sch2;
  sc.grid = g2;
  sc.initial = make_adiabatic_state(gauss(g2, -5.0, 5.0, 1e-3), sch2, med2, true);
  sc.record_every = 20;
  sc.validate();
  const auto traj = integrate(sc);
  const double e0 = traj.records.front().excitation;
  double worst_exc = 0.0;
  for (const auto& r : traj.records)
    worst_exc = std::max(worst_exc, std::abs(r.excitation - e0) / e0);
  const bool exc_ok = worst_exc < 1e-6;
  CHECK(worst_exc < 1e-6);

  // quantum transfer: norm drift below 1e-10
  SystemSpec s;
  s.n_atoms = 3;
  s.n_max = 1;
  ControlSchedule::Sampled shape;
  const double T = 50.0 / s.g_collective();
  for (int k = 0; k <= 256; ++k) {
    const double t = T * double(k) / 256.0;
    shape.t.push_back(t);
    shape.omega.push_back(10.0 * s.g_collective() * 0.5 *
                          (1.0 + std::cos(pi * t / T)));
  }
  s.schedule.shape = std::move(shape);
  const auto med3 = s.as_medium();
  const double th0 = mixing_angle(omega_at(s.schedule, med3, 0.0), med3);
  const auto r = evolve_transfer(s, dark_state(s, th0, 1), 0.0, T, 50);
  const bool drift_ok = r.norm_drift < 1e-10;
  CHECK(r.norm_drift < 1e-10);

  std::printf("  transport norm drift     %.3e  (< 1e-9)\n", worst_norm);
  std::printf("  lossless excitation drift %.3e  (< 1e-6)\n", worst_exc);
  std::printf("  oracle norm drift        %.3e  (< 1e-10)\n", r.norm_drift);
  verdict(7, norm_ok && exc_ok && drift_ok,
          "norms and excitation functionals hold across all three engines");
}

TEST_CASE("criterion 8: entry compression at v_g / c = 0.01") {
  MediumParams med;
  med.g_root_n = 1.0;
  const double cos_th = 0.1;
  ControlSchedule sch;
  sch.shape =
      ControlSchedule::Constant{cos_th / std::sqrt(1.0 - cos_th * cos_th)};

  BoundarySeries in;
  in.t0 = 0.0;
  in.dt = 0.02;
  in.E.resize(2001);
  for (std::size_t k = 0; k < in.E.size(); ++k) {
    const double x = (in.t0 + in.dt * double(k) - 20.0) / 5.0;
    in.E[k] = 1e-3 * std::exp(-x * x);
  }
  const auto psi = inject_boundary(in, sch, med);

  auto rms = [](const std::vector<cplx>& vals, double x0, double dx) {
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const double y = std::norm(vals[i]);
      const double x = x0 + dx * double(i);
      m0 += y;
      m1 += y * x;
      m2 += y * x * x;
    }
    const double mu = m1 / m0;
    return std::sqrt(m2 / m0 - mu * mu);
  };
  const double len_ratio =
      rms(psi.psi, psi.z0, psi.dz) / (rms(in.E, in.t0, in.dt) * med.c);
  double amp_in = 0.0, amp_out = 0.0, n_in = 0.0;
  for (const auto& v : in.E) {
    amp_in = std::max(amp_in, std::abs(v));
    n_in += std::norm(v);
  }
  n_in *= in.dt * med.c;
  for (const auto& v : psi.psi) amp_out = std::max(amp_out, std::abs(v));
  const double amp_ratio = amp_out / amp_in;
  const double norm_err =
      std::abs(trapezoid_norm2(psi.psi, psi.dz) - n_in) / n_in;

  const bool len_ok = std::abs(len_ratio - 0.01) < 0.02 * 0.01;
  const bool amp_ok = std::abs(amp_ratio - 10.0) < 0.01 * 10.0;
  const bool norm_ok = norm_err < 1e-6;
  CHECK(len_ok);
  CHECK(amp_ok);
  CHECK(norm_ok);
  std::printf("  internal/free length  %.6f  (0.01 +- 2%%)\n", len_ratio);
  std::printf("  amplitude factor      %.4f    (10 +- 1%%)\n", amp_ratio);
  std::printf("  norm mismatch         %.3e  (< 1e-6)\n", norm_err);
  verdict(8, len_ok && amp_ok && norm_ok,
          "entering pulse compresses by v_g/c with conserved norm");
}

TEST_CASE("criterion 9: intensity-ratio identity across regimes") {
  MediumParams med;
  med.g_root_n = 10.0;
  med.gamma_ab = 5.0;  // figure 200 for a width-10 pulse
  ControlSchedule sch;
  sch.shape = ControlSchedule::Constant{10.0};
  Grid g;
  g.z_min = -60;
  g.z_max = 60;
  g.n_z = 2401;
  g.t_min = 0;
  g.t_max = 40;
  g.n_t = 800;
  Scenario sc;
  sc.medium = med;
  sc.schedule = sch;
  sc.grid = g;
  sc.initial = make_adiabatic_state(gauss(g, -20.0, 10.0, 1e-3), sch, med, true);
  sc.record_every = 400;
  sc.validate();
  const auto traj = integrate(sc);
  const double deep = intensity_ratio_residual(traj.snapshots[1], 10.0, med);

  // same medium driven to figure ~ 1 by a 200x larger optical decay
  MediumParams med2 = med;
  med2.gamma_ab = 1000.0;
  Grid g2;
  g2.z_min = -50;
  g2.z_max = 10;
  g2.n_z = 1201;
  g2.t_min = 0;
  g2.t_max = 3;
  g2.n_t = 60;
  Scenario sc2;
  sc2.medium = med2;
  sc2.schedule = sch;
  sc2.grid = g2;
  sc2.stepper = Scenario::Stepper::exponential_midpoint;  // gamma dt is stiff
  sc2.initial = make_adiabatic_state(gauss(g2, -20.0, 10.0, 1e-3), sch, med2, true);
  sc2.record_every = 30;
  sc2.validate();
  const auto traj2 = integrate(sc2);
  const double marginal = intensity_ratio_residual(traj2.snapshots[1], 10.0, med2);

  const bool deep_ok = deep < 0.05;
  const bool grows = marginal > 10.0 * deep && marginal > 0.05;
  CHECK(deep < 0.05);
  CHECK(marginal > 10.0 * deep);
  std::printf("  deep-adiabatic residual (figure 200)  %.3e  (< 0.05)\n", deep);
  std::printf("  marginal residual (figure 1)          %.3e  (grows)\n",
              marginal);
  verdict(9, deep_ok && grows,
          "field/matter intensity ratio holds only in the adiabatic regime");
}
