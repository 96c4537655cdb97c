#include "polsim/interpolate.hpp"

#include <algorithm>
#include <cmath>

#include "polsim/errors.hpp"

namespace polsim {

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
  const std::size_t n = x_.size();
  if (n != y_.size() || n < 2)
    throw config_error("spline: need matching arrays with at least 2 points");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1]))
      throw config_error("spline: abscissae must be strictly increasing");

  m_.assign(n, 0.0);
  if (n >= 4) {
    // Not-a-knot: eliminate the end moments via third-derivative
    // continuity, solve the interior tridiagonal system, back-substitute.
    const std::size_t ni = n - 2;  // unknowns M_1 .. M_{n-2}
    std::vector<double> a(ni), b(ni), cc(ni), r(ni);
    auto h = [&](std::size_t i) { return x_[i + 1] - x_[i]; };
    auto rhs = [&](std::size_t i) {
      return 6.0 * ((y_[i + 1] - y_[i]) / h(i) - (y_[i] - y_[i - 1]) / h(i - 1));
    };
    for (std::size_t k = 0; k < ni; ++k) {
      const std::size_t i = k + 1;
      a[k] = h(i - 1);
      b[k] = 2.0 * (h(i - 1) + h(i));
      cc[k] = h(i);
      r[k] = rhs(i);
    }
    const double rl = h(0) / h(1);
    b[0] += h(0) * (1.0 + rl);
    cc[0] -= h(0) * rl;
    const double rr = h(n - 2) / h(n - 3);
    b[ni - 1] += h(n - 2) * (1.0 + rr);
    a[ni - 1] -= h(n - 2) * rr;

    for (std::size_t k = 1; k < ni; ++k) {
      const double w = a[k] / b[k - 1];
      b[k] -= w * cc[k - 1];
      r[k] -= w * r[k - 1];
    }
    m_[n - 2] = r[ni - 1] / b[ni - 1];
    for (std::size_t k = ni - 1; k-- > 0;)
      m_[k + 1] = (r[k] - cc[k] * m_[k + 2]) / b[k];
    m_[0] = m_[1] * (1.0 + rl) - m_[2] * rl;
    m_[n - 1] = m_[n - 2] * (1.0 + rr) - m_[n - 3] * rr;
  } else if (n == 3) {
    // single parabola through three points: M constant
    const double h0 = x_[1] - x_[0], h1 = x_[2] - x_[1];
    const double m = 2.0 * ((y_[2] - y_[1]) / h1 - (y_[1] - y_[0]) / h0) / (h0 + h1);
    m_.assign(3, m);
  }

  uniform_ = true;
  h_ = x_[1] - x_[0];
  x0_ = x_[0];
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (std::abs((x_[i + 1] - x_[i]) - h_) > 1e-12 * std::abs(h_)) {
      uniform_ = false;
      break;
    }
}

std::size_t CubicSpline::interval(double x) const {
  const std::size_t n = x_.size();
  if (uniform_) {
    double u = (x - x0_) / h_;
    if (u < 0.0) u = 0.0;
    std::size_t i = std::size_t(u);
    return std::min(i, n - 2);
  }
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  if (it == x_.begin()) return 0;
  return std::min(std::size_t(it - x_.begin()) - 1, n - 2);
}

double CubicSpline::operator()(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double u = x - x_[i], w = x_[i + 1] - x;
  return (m_[i] * w * w * w + m_[i + 1] * u * u * u) / (6.0 * h) +
         (y_[i] / h - m_[i] * h / 6.0) * w + (y_[i + 1] / h - m_[i + 1] * h / 6.0) * u;
}

double CubicSpline::derivative(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double u = x - x_[i], w = x_[i + 1] - x;
  return (-m_[i] * w * w + m_[i + 1] * u * u) / (2.0 * h) +
         (y_[i + 1] - y_[i]) / h - (m_[i + 1] - m_[i]) * h / 6.0;
}

ProfileInterpolant::ProfileInterpolant(std::span<const std::complex<double>> v,
                                       double z0, double dz)
    : z0_(z0), dz_(dz), n_(v.size()) {
  if (n_ < 2) throw config_error("profile interpolant: need at least 2 samples");
  std::vector<double> x(n_), re(n_), im(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    x[i] = z0 + double(i) * dz;
    re[i] = v[i].real();
    im[i] = v[i].imag();
  }
  re_ = CubicSpline(x, re);
  im_ = CubicSpline(x, im);
}

std::complex<double> ProfileInterpolant::operator()(double z) const {
  if (z < z0_ || z > z0_ + double(n_ - 1) * dz_) return {0.0, 0.0};
  return {re_(z), im_(z)};
}

}  // namespace polsim
