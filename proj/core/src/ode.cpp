#include "polsim/ode.hpp"

#include <algorithm>
#include <cmath>

#include "polsim/errors.hpp"

namespace polsim {

OdeResult integrate_dp54(const std::function<double(double, double)>& f,
                         double t0, double t1, double y0, double rel_tol,
                         double abs_tol, std::size_t max_steps) {
  // Dormand-Prince coefficients.  The order-5/order-4 pair shares stages;
  // k7 doubles as the FSAL first stage of the next step.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  OdeResult res;
  if (t0 == t1) {
    res.y = y0;
    return res;
  }
  const double dir = (t1 > t0) ? 1.0 : -1.0;
  double t = t0, y = y0;
  double span = std::abs(t1 - t0);
  double h = dir * std::min(span, std::max(span * 1e-3, 1e-8));
  double k1 = f(t, y);

  while (dir * (t1 - t) > 0.0) {
    if (res.steps + res.rejected >= max_steps)
      throw numerical_error("integrate_dp54: step budget exhausted");
    if (dir * (t + h) > dir * t1) h = t1 - t;

    const double k2 = f(t + c2 * h, y + h * a21 * k1);
    const double k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const double k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = f(t + h, y5);
    const double err = std::abs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
    const double scale = abs_tol + rel_tol * std::max(std::abs(y), std::abs(y5));

    if (err <= scale) {
      t += h;
      y = y5;
      k1 = k7;  // FSAL
      ++res.steps;
    } else {
      ++res.rejected;
    }
    const double ratio = (err > 0.0) ? std::pow(scale / err, 0.2) : 5.0;
    h *= std::clamp(0.9 * ratio, 0.2, 5.0);
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t)))
      throw numerical_error("integrate_dp54: step size underflow");
  }
  res.y = y;
  return res;
}

}  // namespace polsim
