#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace polsim {

// Not-a-knot C2 cubic spline.  Fourth order on smooth data, which the
// profile-shift accuracy targets require; evaluation extrapolates the end
// cubics, so callers that want compact support must clamp themselves.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::span<const double> x, std::span<const double> y);

  double operator()(double x) const;
  double derivative(double x) const;

 private:
  std::size_t interval(double x) const;
  std::vector<double> x_, y_, m_;  // nodes, values, second derivatives
  bool uniform_ = false;
  double x0_ = 0.0, h_ = 1.0;
};

// Complex profile sampled on a uniform grid, treated as compactly
// supported: evaluates to zero outside the sampled range.
class ProfileInterpolant {
 public:
  ProfileInterpolant(std::span<const std::complex<double>> v, double z0,
                     double dz);

  std::complex<double> operator()(double z) const;

 private:
  double z0_, dz_;
  std::size_t n_;
  CubicSpline re_, im_;
};

}  // namespace polsim
