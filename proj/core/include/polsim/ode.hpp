#pragma once

#include <cstddef>
#include <functional>

namespace polsim {

struct OdeResult {
  double y = 0.0;
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

// Embedded Dormand-Prince 5(4) for a scalar ODE y' = f(t, y) with
// proportional step control.  Integrates from t0 to t1 in either
// direction.  Throws numerical_error when the step count budget runs out
// or the step size underflows.
OdeResult integrate_dp54(const std::function<double(double, double)>& f,
                         double t0, double t1, double y0, double rel_tol,
                         double abs_tol, std::size_t max_steps = 1000000);

}  // namespace polsim
