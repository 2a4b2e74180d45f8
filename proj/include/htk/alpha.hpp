#pragma once
#include <cmath>
#include <cstdint>

#include "htk/constants.hpp"
#include "htk/quadrature.hpp"

namespace htk::analytic {

// alpha_d = int_{c^*/(d+1)}^{1} log sbar(r^{-1}(x)) dx  (a negative constant).
// Primary evaluation substitutes y = t_c, which turns the integral into
//   int_0^{t^*} A(y) log A(y) ((1-y) + d y log y) / ((d+1) y (1-y)^{d+1}) dy
// with A(y) = 1 - (1-y)^{d+1}; the integrable log singularity at y = 0 and
// the direct x-form (which needs r^{-1} per abscissa) serve as cross-checks
// of one another.
struct AlphaResult {
  std::int32_t d = 0;
  double alpha = 0;      // y-substitution form
  double alpha_alt = 0;  // direct x-form
  double diff = 0;       // |alpha - alpha_alt|
};

inline double alpha_y_form(const ThresholdConstants& th, double tol = 1e-10) {
  const int d = th.d;
  auto f = [&](double y, double gap_lo, double /*gap_hi*/) -> double {
    y = gap_lo < 1e-3 ? gap_lo : y;  // exact tiny-y from the quadrature gap
    const double log1my = std::log1p(-y);
    const double A_over_y = -std::expm1((d + 1) * log1my) / y;
    const double A = A_over_y * y;
    const double logA = A < 1e-280 ? std::log(d + 1.0) + std::log(y) : std::log(A);
    const double num = (1.0 - y) + d * y * std::log(y);
    const double pow_1my_d1 = std::exp((d + 1) * log1my);  // (1-y)^{d+1}
    return A_over_y * logA * num / ((d + 1) * pow_1my_d1);
  };
  return tanh_sinh(f, 0.0, th.t_star, tol);
}

inline double alpha_x_form(const ThresholdConstants& th, double tol = 1e-10) {
  const int d = th.d;
  const double a = th.c_star / (d + 1);
  auto f = [&](double /*x*/, double /*gap_lo*/, double gap_hi) -> double {
    const double c = r_inverse_gap(gap_hi, th);
    const double t = t_of_c(c, th);
    if (t < 1e-200)  // sbar ~ (d+1) t; avoid the underflowing product
      return std::log(d + 1.0) - c * std::pow(1.0 - t, d);
    return std::log(sbar_of_t(t, d));
  };
  return tanh_sinh(f, a, 1.0, tol);
}

inline AlphaResult alpha_constant(std::int32_t d, double tol = 1e-9) {
  const ThresholdConstants th = threshold(d);
  AlphaResult r;
  r.d = d;
  r.alpha = alpha_y_form(th, tol * 0.1);
  r.alpha_alt = alpha_x_form(th, tol * 0.1);
  r.diff = std::fabs(r.alpha - r.alpha_alt);
  return r;
}

}  // namespace htk::analytic
