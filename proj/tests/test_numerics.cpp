#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "polsim/errors.hpp"
#include "polsim/interpolate.hpp"
#include "polsim/ode.hpp"
#include "polsim/quadrature.hpp"

using namespace polsim;

TEST_CASE("cubic spline reproduces cubics exactly") {
  std::vector<double> x, y;
  auto f = [](double u) { return 2.0 - u + 0.5 * u * u - 0.125 * u * u * u; };
  for (int i = 0; i <= 12; ++i) {
    x.push_back(0.3 * i);
    y.push_back(f(x.back()));
  }
  const CubicSpline s(x, y);
  for (double u = 0.05; u < 3.55; u += 0.1) {
    CHECK(s(u) == doctest::Approx(f(u)).epsilon(1e-13));
    CHECK(s.derivative(u) ==
          doctest::Approx(-1.0 + u - 0.375 * u * u).epsilon(1e-11));
  }
}

TEST_CASE("cubic spline converges at fourth order on a gaussian") {
  auto err_at = [](std::size_t n) {
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = -6.0 + 12.0 * double(i) / double(n - 1);
      y[i] = std::exp(-x[i] * x[i]);
    }
    const CubicSpline s(x, y);
    double worst = 0.0;
    for (double u = -3.0; u <= 3.0; u += 0.0137)
      worst = std::max(worst, std::abs(s(u) - std::exp(-u * u)));
    return worst;
  };
  const double coarse = err_at(61);
  const double fine = err_at(121);
  CHECK(coarse / fine > 10.0);  // ~16x for a fourth-order method
  CHECK(fine < 1e-5);
}

TEST_CASE("profile interpolant is compactly supported") {
  std::vector<std::complex<double>> v(11, {1.0, -2.0});
  const ProfileInterpolant p(v, 0.0, 0.5);
  CHECK(p(2.5).real() == doctest::Approx(1.0));
  CHECK(p(2.5).imag() == doctest::Approx(-2.0));
  CHECK(p(-0.01) == std::complex<double>(0.0, 0.0));
  CHECK(p(5.01) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("adaptive quadrature hits analytic integrals") {
  const double pi = std::acos(-1.0);
  CHECK(integrate_adaptive([](double x) { return x * x; }, 0.0, 3.0, 1e-12) ==
        doctest::Approx(9.0).epsilon(1e-12));
  // integral of exp(-2 (z/10)^2) over the real line, generously truncated
  const double norm = integrate_adaptive(
      [](double z) { return std::exp(-2.0 * z * z / 100.0); }, -80.0, 80.0,
      1e-12);
  CHECK(norm == doctest::Approx(std::sqrt(50.0 * pi)).epsilon(1e-12));
  CHECK(std::sqrt(50.0 * pi) ==
        doctest::Approx(12.5331413731550025).epsilon(1e-15));
  // sharply peaked integrand forces the panel subdivision to work
  const double peaked = integrate_adaptive(
      [](double x) { return 1.0 / (1e-6 + x * x); }, -1.0, 1.0, 1e-9);
  CHECK(peaked == doctest::Approx(2e3 * std::atan(1e3)).epsilon(1e-10));
}

TEST_CASE("fixed gauss-legendre panel is exact for matching polynomial order") {
  // 12-point rule integrates degree 23 exactly
  const double val = gauss_legendre(
      [](double x) { return std::pow(x, 11.0); }, 0.0, 1.0, 12);
  CHECK(val == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("embedded rk pair integrates both directions") {
  const auto fwd = integrate_dp54(
      [](double, double y) { return -y; }, 0.0, 5.0, 1.0, 1e-10, 1e-14);
  CHECK(fwd.y == doctest::Approx(std::exp(-5.0)).epsilon(1e-8));
  CHECK(fwd.steps > 0);

  const auto bwd = integrate_dp54(
      [](double, double y) { return -y; }, 5.0, 0.0, std::exp(-5.0), 1e-10,
      1e-14);
  CHECK(bwd.y == doctest::Approx(1.0).epsilon(1e-8));

  // stiffness budget: blow the step limit and make sure it surfaces
  CHECK_THROWS_AS((void)integrate_dp54([](double,
                                          double y) { return -1e8 * y; }, 0.0,
                                       10.0, 1.0, 1e-12, 1e-16, 100),
                  numerical_error);
}
