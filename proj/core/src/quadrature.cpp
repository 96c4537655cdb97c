#include "polsim/quadrature.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "polsim/errors.hpp"

namespace polsim {

namespace {

struct GaussRule {
  std::vector<double> x, w;  // nodes and weights on [-1, 1]
};

// Newton iteration on Legendre polynomials; machine-accurate for the
// orders used here.
GaussRule make_rule(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p1 = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dpf = n * (x * p1 - p0) / (x * x - 1.0);
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dpf * dpf);
        break;
      }
    }
  }
  if (n % 2 == 1) {
    // central node: P_n(0) has a root there for odd n
    double p0 = 1.0, p1 = 0.0;
    for (int k = 2; k <= n; ++k) {
      const double p2 = (-(k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = -n * p0;  // P_n'(0) = -n P_{n-1}(0) / (0 - 1) sign folded
    r.x[n / 2] = 0.0;
    r.w[n / 2] = 2.0 / (dp * dp);
  }
  return r;
}

double panel(const GaussRule& r, const std::function<double(double)>& f,
             double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(mid + half * r.x[i]);
  return s * half;
}

double adapt(const GaussRule& r, const std::function<double(double)>& f,
             double a, double b, double tol, double whole, int depth) {
  const double m = 0.5 * (a + b);
  const double left = panel(r, f, a, m);
  const double right = panel(r, f, m, b);
  const double err = std::abs(left + right - whole);
  if (err <= tol || err == 0.0) return left + right;
  if (depth <= 0)
    throw numerical_error("adaptive quadrature: recursion depth exhausted before tolerance");
  return adapt(r, f, a, m, 0.5 * tol, left, depth - 1) +
         adapt(r, f, m, b, 0.5 * tol, right, depth - 1);
}

const GaussRule& rule12() {
  static const GaussRule r = make_rule(12);
  return r;
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  if (!(abs_tol > 0.0)) throw config_error("integrate_adaptive: tolerance must be positive");
  const double sign = (b >= a) ? 1.0 : -1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);
  const GaussRule& r = rule12();
  return sign * adapt(r, f, lo, hi, abs_tol, panel(r, f, lo, hi), max_depth);
}

double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, int order) {
  if (order < 2 || order > 64) throw config_error("gauss_legendre: order out of range");
  return panel(make_rule(order), f, a, b);
}

}  // namespace polsim
