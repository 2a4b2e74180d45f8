#pragma once
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace htk::analytic {

// Tanh-sinh quadrature over (a, b) for integrands with endpoint singularities
// (log blowups included). The integrand receives, besides the abscissa, its
// distances to both endpoints computed without cancellation, so callers can
// evaluate expressions like log(x - a) accurately even when x - a ~ 1e-60.
//
// f: (double x, double gap_lo, double gap_hi) -> double
template <class F>
double tanh_sinh(F&& f, double a, double b, double tol = 1e-9, int max_level = 12) {
  if (!(b > a)) throw std::invalid_argument("tanh_sinh: empty interval");
  const double half = 0.5 * (b - a);
  const double kPiHalf = 1.5707963267948966;
  const double kTauMax = 4.5;  // unit-interval gap ~ 2.6e-62 at the last node

  // evaluate the transformed integrand at tau; returns w(tau) * f(x(tau))
  auto node = [&](double tau) -> double {
    const double u = kPiHalf * std::sinh(tau);
    // 1 - tanh(u) = 2 e^{-2u} / (1 + e^{-2u}); keep both gaps exact
    const double e2 = std::exp(-2.0 * std::fabs(u));
    double gap_near = e2 / (1.0 + e2);              // unit gap to the nearer endpoint
    double gap_far = 1.0 / (1.0 + e2);              // and to the farther one
    const double w = kPiHalf * std::cosh(tau) * (4.0 * e2 / ((1.0 + e2) * (1.0 + e2)));
    double glo = u < 0 ? gap_near : gap_far;
    double ghi = u < 0 ? gap_far : gap_near;
    const double x = u < 0 ? a + (b - a) * glo : b - (b - a) * ghi;
    const double fx = f(x, (b - a) * glo, (b - a) * ghi);
    return w * fx;
  };

  double h = 1.0;
  double sum = node(0.0);
  {
    // level 0: integer nodes
    for (int j = 1; j * h <= kTauMax; ++j) sum += node(j * h) + node(-j * h);
  }
  double integral = h * sum;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    double add = 0.0;
    int tiny_run = 0;
    for (int j = 1; (2 * j - 1) * h <= kTauMax; j += 1) {
      const double tau = (2 * j - 1) * h;  // only the new (odd) nodes
      const double t1 = node(tau), t2 = node(-tau);
      add += t1 + t2;
      if (std::fabs(t1) + std::fabs(t2) < 1e-18 * (1.0 + std::fabs(add)))
        ++tiny_run;
      else
        tiny_run = 0;
      if (tiny_run > 8) break;  // doubly-exponential tail is dead
    }
    const double next = 0.5 * integral + h * add;
    const double err = std::fabs(next - integral);
    integral = next;
    if (level >= 3 && err < tol * (1.0 + std::fabs(integral))) break;
  }
  return half * integral;
}

}  // namespace htk::analytic
