#pragma once

#include <functional>

namespace polsim {

// Adaptive quadrature to an absolute tolerance.  Panels are integrated
// with a 12-point Gauss-Legendre rule (nodes computed at startup, no
// tabulated constants) and split until the half-panel refinement agrees
// within the local tolerance.  Throws numerical_error if the recursion
// depth is exhausted first.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, int max_depth = 48);

// Single fixed-order panel, exposed for cross-checks.
double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, int order);

}  // namespace polsim
