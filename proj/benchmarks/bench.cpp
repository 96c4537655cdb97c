#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "polsim/adiabatic.hpp"
#include "polsim/bloch.hpp"
#include "polsim/interpolate.hpp"
#include "polsim/oracle.hpp"

using namespace polsim;

namespace {

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

// Full space-time sweep; the counter is grid points times steps so the
// number is comparable across grid sizes.
void bloch_integrate(benchmark::State& state) {
  MediumParams med;
  med.g_root_n = 10.0;
  med.gamma_ab = 5.0;
  ControlSchedule sch;
  sch.shape = ControlSchedule::Constant{10.0};
  Grid g;
  g.z_min = -60;
  g.z_max = 60;
  g.n_z = std::size_t(state.range(0));
  g.t_min = 0;
  g.t_max = 120.0 / double(g.n_z - 1) * 200.0;  // keep c dt = dz
  g.n_t = 200;
  Scenario sc;
  sc.medium = med;
  sc.schedule = sch;
  sc.grid = g;
  sc.initial = make_adiabatic_state(gauss(g, -20.0, 10.0, 1e-3), sch, med, true);
  sc.record_every = g.n_t;
  sc.validate();
  for (auto _ : state) {
    auto traj = integrate(sc);
    benchmark::DoNotOptimize(traj.records.back().excitation);
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(g.n_z) *
                          int64_t(g.n_t));
}
BENCHMARK(bloch_integrate)->Arg(1201)->Arg(2401)->Arg(4801)->Unit(benchmark::kMillisecond);

void bloch_integrate_expm(benchmark::State& state) {
  MediumParams med;
  med.g_root_n = 10.0;
  med.gamma_ab = 5.0;
  ControlSchedule sch;
  sch.shape = ControlSchedule::Constant{10.0};
  Grid g;
  g.z_min = -60;
  g.z_max = 60;
  g.n_z = 2401;
  g.t_min = 0;
  g.t_max = 10;
  g.n_t = 200;
  Scenario sc;
  sc.medium = med;
  sc.schedule = sch;
  sc.grid = g;
  sc.stepper = Scenario::Stepper::exponential_midpoint;
  sc.initial = make_adiabatic_state(gauss(g, -20.0, 10.0, 1e-3), sch, med, true);
  sc.record_every = g.n_t;
  sc.validate();
  for (auto _ : state) {
    auto traj = integrate(sc);
    benchmark::DoNotOptimize(traj.records.back().excitation);
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(g.n_z) *
                          int64_t(g.n_t));
}
BENCHMARK(bloch_integrate_expm)->Unit(benchmark::kMillisecond);

// Spline construction plus one resampled translation, the inner operation
// of shape-preserving transport.
void profile_shift(benchmark::State& state) {
  Grid g;
  g.z_min = -60;
  g.z_max = 360;
  g.n_z = std::size_t(state.range(0));
  const auto p = gauss(g, 0.0, 10.0, 1.0);
  std::vector<cplx> out(p.size());
  for (auto _ : state) {
    ProfileInterpolant spline(p.psi, p.z0, p.dz);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = spline(p.z(i) - 17.3);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(g.n_z));
}
BENCHMARK(profile_shift)->Arg(2101)->Arg(8401);

// Sparse operator application, the inner loop of the quantum transfer.
void oracle_matvec(benchmark::State& state) {
  SystemSpec spec;
  spec.n_atoms = int(state.range(0));
  spec.n_max = 2;
  const auto op = build_interaction(spec, 3.7);
  std::vector<cplx> in(op.dimension()), out(op.dimension());
  for (std::size_t i = 0; i < in.size(); ++i)
    in[i] = cplx(std::sin(double(i)), std::cos(0.7 * double(i)));
  for (auto _ : state) {
    op.apply(in.data(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(op.dimension()));
}
BENCHMARK(oracle_matvec)->Arg(4)->Arg(6)->Arg(8);

void displacement_quadrature(benchmark::State& state) {
  MediumParams med;
  ControlSchedule sch;
  sch.shape = ControlSchedule::TanhPair{100.0, 0.1, 15.0, 125.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(displacement(sch, med, 0.0, 200.0));
  }
}
BENCHMARK(displacement_quadrature);

}  // namespace

BENCHMARK_MAIN();
