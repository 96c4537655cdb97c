#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "polsim/oracle.hpp"

using namespace polsim;

namespace {

SystemSpec spec_of(int atoms, int n_max, double g = 1.0) {
  SystemSpec s;
  s.n_atoms = atoms;
  s.n_max = n_max;
  s.g = g;
  s.schedule.shape = ControlSchedule::Constant{0.0};
  return s;
}

const double pi = std::acos(-1.0);

}  // namespace

TEST_CASE("system bounds and dimension bookkeeping") {
  auto s = spec_of(3, 2);
  s.validate();
  CHECK(s.dimension() == 81);  // 3^3 * (2+1)
  CHECK(s.g_collective() == doctest::Approx(std::sqrt(3.0)));

  CHECK_THROWS_AS(spec_of(9, 1).validate(), domain_overflow);
  CHECK_THROWS_AS(spec_of(0, 1).validate(), domain_overflow);
  CHECK_THROWS_AS(spec_of(2, 5).validate(), domain_overflow);
  auto bad = spec_of(2, 1);
  bad.g = 0.0;
  CHECK_THROWS_AS(bad.validate(), config_error);
}

TEST_CASE("sparse operator application matches the dense export") {
  const auto s = spec_of(3, 2, 0.8);
  const auto op = build_interaction(s, 1.3);
  const auto M = op.dense();
  REQUIRE(M.rows() == long(s.dimension()));

  // hermiticity of the dense form
  CHECK((M - M.adjoint()).cwiseAbs().maxCoeff() < 1e-14);

  std::vector<cplx> in(s.dimension()), out(s.dimension());
  for (std::size_t i = 0; i < in.size(); ++i)
    in[i] = cplx(std::cos(0.3 * double(i)), std::sin(0.7 * double(i)));
  op.apply(in.data(), out.data());

  for (std::size_t i = 0; i < in.size(); ++i) {
    cplx want{0.0, 0.0};
    for (std::size_t j = 0; j < in.size(); ++j) want += M(long(i), long(j)) * in[j];
    CHECK(std::abs(out[i] - want) < 1e-12);
  }

  // gershgorin bounds the spectral radius seen through a random vector
  double n2 = 0.0, vn2 = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    n2 += std::norm(in[i]);
    vn2 += std::norm(out[i]);
  }
  CHECK(std::sqrt(vn2 / n2) <= op.gershgorin_bound(1.3));
}

TEST_CASE("matched dark states are annihilated by the interaction") {
  for (int atoms = 1; atoms <= 4; ++atoms)
    for (int n = 1; n <= std::min(atoms, 2); ++n)
      for (double th : {1e-3, pi / 6, pi / 4, pi / 3, pi / 2 - 1e-3, pi / 2}) {
        const auto s = spec_of(atoms, 2);
        const double omega = control_for_angle(s, th);
        CHECK(dark_residual(s, th, n, omega) < 1e-12);
      }
}

TEST_CASE("dark state norm and excited-level content") {
  const auto s = spec_of(4, 2);
  for (int n : {1, 2}) {
    const auto d = dark_state(s, 0.9, n);
    double norm2 = 0.0;
    for (const auto& a : d.amp) norm2 += std::norm(a);
    CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK_THROWS_AS((void)dark_state(s, 0.5, 3), config_error);   // above n_max
  CHECK_THROWS_AS((void)dark_state(s, 0.5, -1), config_error);
}

TEST_CASE("single-excitation mismatch residual has the closed form") {
  // V D_1(theta) leaves amplitude (Omega sin th / sqrt N - g cos th) sqrt N
  // on the single-excited-atom manifold
  const auto s = spec_of(3, 1, 0.7);
  const double root_n = std::sqrt(3.0);
  for (double th : {0.3, 0.8, 1.2})
    for (double omega : {0.5, 2.0}) {
      const double want =
          std::abs(omega * std::sin(th) / root_n - s.g * std::cos(th)) * root_n;
      CHECK(dark_residual(s, th, 1, omega) ==
            doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("ground-state commutator is exactly bosonic") {
  for (int atoms : {1, 2, 5})
    for (double th : {0.0, 0.4, pi / 2}) {
      const auto s = spec_of(atoms, 2);
      CHECK(commutator_expectation(s, th) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("commutator depletion on an excited state matches the finite-N law") {
  // on D_1: <[P, P+]> = cos^2 th + (sin^2 th / N) (N cos^2 th + (N-2) sin^2 th)
  for (int atoms : {2, 3, 5}) {
    const auto s = spec_of(atoms, 2);
    const double n = double(atoms);
    for (double th : {0.2, 0.7, pi / 2}) {
      const auto d = dark_state(s, th, 1);
      const double c2 = std::cos(th) * std::cos(th);
      const double s2 = std::sin(th) * std::sin(th);
      const double want = c2 + s2 / n * (n * c2 + (n - 2.0) * s2);
      CHECK(commutator_expectation(s, th, d) ==
            doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("dark state is stationary under a matched constant control") {
  SystemSpec s = spec_of(3, 1);
  const double th = 0.6;
  const double omega = control_for_angle(s, th);
  s.schedule.shape = ControlSchedule::Constant{omega};
  const auto d = dark_state(s, th, 1);
  const auto r = evolve_transfer(s, d, 0.0, 5.0, 20);
  CHECK(r.norm_drift < 1e-10);
  CHECK(r.excitation_drift < 1e-10);
  for (const auto& sample : r.trace)
    CHECK(sample.fidelity == doctest::Approx(1.0).epsilon(1e-10));
  // the state itself is unchanged, not just its overlap
  double dev = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    dev = std::max(dev, std::abs(r.final_state.amp[i] - d.amp[i]));
  CHECK(dev < 1e-9);
}

TEST_CASE("slow control turn-off maps a photon onto the spin wave") {
  SystemSpec s = spec_of(3, 1);
  const double grn = s.g_collective();
  ControlSchedule::Sampled ramp;
  const double T = 120.0 / grn;
  for (int k = 0; k <= 256; ++k) {
    const double t = T * double(k) / 256.0;
    ramp.t.push_back(t);
    ramp.omega.push_back(10.0 * grn * 0.5 * (1.0 + std::cos(pi * t / T)));
  }
  s.schedule.shape = ramp;
  const double th0 =
      mixing_angle(omega_at(s.schedule, s.as_medium(), 0.0), s.as_medium());
  const auto psi0 = dark_state(s, th0, 1);
  const auto r = evolve_transfer(s, psi0, 0.0, T, 60);

  CHECK(r.trace.back().fidelity > 0.999);
  CHECK(r.norm_drift < 1e-10);
  // the control ends off, so the target is the pure spin wave
  const auto spin = dark_state(s, pi / 2, 1);
  cplx overlap{0.0, 0.0};
  for (std::size_t i = 0; i < spin.size(); ++i)
    overlap += std::conj(spin.amp[i]) * r.final_state.amp[i];
  CHECK(std::norm(overlap) > 0.999);
}

TEST_CASE("dense export is refused at large dimension") {
  const auto s = spec_of(8, 4);  // dimension 32805
  const auto op = build_interaction(s, 1.0);
  CHECK(op.dimension() == 32805);
  CHECK_THROWS_AS((void)op.dense(), domain_overflow);
}
