#pragma once
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace htk::analytic {

// critical pair (t_d^*, c_d^*): t^* is the unique root in (0,1) of
//   (d+1)(1-t) + (1+dt) log t = 0,
// and c^* = -log(t^*) / (1-t^*)^d, so that t^* = exp(-c^* (1-t^*)^d).
struct ThresholdConstants {
  std::int32_t d = 0;
  double t_star = 0;
  double c_star = 0;
};

inline ThresholdConstants threshold(std::int32_t d) {
  if (d < 2) throw std::invalid_argument("threshold: requires d >= 2");
  if (d > 60) throw std::invalid_argument("threshold: d out of supported range");
  auto f = [d](double t) { return (d + 1) * (1.0 - t) + (1.0 + d * t) * std::log(t); };
  double lo = 1e-12, hi = 0.5;  // f(lo) < 0 < f(hi) for 2 <= d <= 60
  if (!(f(lo) < 0.0) || !(f(hi) > 0.0)) throw std::logic_error("threshold: bracket failed");
  for (int it = 0; it < 200 && hi - lo > 1e-18 + 1e-17 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  ThresholdConstants th;
  th.d = d;
  th.t_star = 0.5 * (lo + hi);
  th.c_star = -std::log(th.t_star) / std::pow(1.0 - th.t_star, d);
  return th;
}

// smallest root in (0, t^*) of t = exp(-c (1-t)^d); defined only for c > c^*
inline double t_of_c(double c, const ThresholdConstants& th) {
  if (!(c > th.c_star)) throw std::domain_error("t_of_c: requires c > c_star");
  const int d = th.d;
  auto g = [&](double t) { return t - std::exp(-c * std::pow(1.0 - t, d)); };
  double lo = 0.0, hi = th.t_star;  // g(0) = -e^{-c} < 0 and g(t^*) > 0 for c > c^*
  // roots sit near e^{-c}, so the interval may need to shrink through the
  // whole double range; the width test exits in ~60 iterations for moderate c
  for (int it = 0; it < 1100 && hi - lo > 1e-300 + 1e-17 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double t_of_c(double c, std::int32_t d) { return t_of_c(c, threshold(d)); }

// limit density of the shadow-complement: sbar = 1 - (1-t_c)^{d+1}
inline double sbar_of_t(double t, std::int32_t d) {
  return -std::expm1((d + 1) * std::log1p(-t));
}

inline double sbar(double c, const ThresholdConstants& th) {
  return sbar_of_t(t_of_c(c, th), th.d);
}

inline double sbar(double c, std::int32_t d) { return sbar(c, threshold(d)); }

// limit of rank / C(n-1,d) for Y_d(n, c/n)
inline double r_of_c(double c, const ThresholdConstants& th) {
  if (c < 0) throw std::domain_error("r_of_c: negative density");
  const int d = th.d;
  if (c <= th.c_star) return c / (d + 1);
  const double t = t_of_c(c, th);
  const double sb = sbar_of_t(t, d);
  return c * sb / (d + 1) + (1.0 - t) - c * t * std::pow(1.0 - t, d);
}

inline double r_of_c(double c, std::int32_t d) { return r_of_c(c, threshold(d)); }

// 1 - r(c) without cancellation (r -> 1 exponentially fast as c grows)
inline double one_minus_r(double c, const ThresholdConstants& th) {
  const int d = th.d;
  if (c <= th.c_star) return 1.0 - c / (d + 1);
  const double t = t_of_c(c, th);
  const double sb = sbar_of_t(t, d);
  return t - c * sb / (d + 1) + c * t * std::pow(1.0 - t, d);
}

// solve 1 - r(c) = gap for c > c_star (gap < 1 - c_star/(d+1))
inline double r_inverse_gap(double gap, const ThresholdConstants& th) {
  if (!(gap > 0.0)) throw std::domain_error("r_inverse_gap: requires gap > 0");
  double lo = th.c_star, hi = 2.0 * th.c_star;
  while (one_minus_r(hi, th) > gap) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) throw std::runtime_error("r_inverse: no bracket");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (one_minus_r(mid, th) > gap ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// inverse of r: the density at which the normalized rank limit equals x
inline double r_inverse(double x, const ThresholdConstants& th) {
  if (!(x >= 0.0) || x >= 1.0) throw std::domain_error("r_inverse: requires 0 <= x < 1");
  const int d = th.d;
  if (x <= th.c_star / (d + 1)) return (d + 1) * x;
  return r_inverse_gap(1.0 - x, th);
}

inline double r_inverse(double x, std::int32_t d) { return r_inverse(x, threshold(d)); }

struct CurvePoint {
  double c = 0;
  double t = 0;
  double sbar = 0;
  double r = 0;
};

// sample (c, t_c, sbar(c), r(c)) on a uniform grid over [c_lo, c_hi]
inline std::vector<CurvePoint> curve_table(std::int32_t d, double c_lo, double c_hi,
                                           std::size_t steps) {
  const ThresholdConstants th = threshold(d);
  if (!(c_lo > th.c_star)) throw std::domain_error("curve_table: requires c_lo > c_star");
  if (!(c_hi >= c_lo) || steps < 1) throw std::invalid_argument("curve_table: bad grid");
  std::vector<CurvePoint> out;
  out.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    CurvePoint p;
    p.c = c_lo + (c_hi - c_lo) * static_cast<double>(i) / static_cast<double>(steps);
    p.t = t_of_c(p.c, th);
    p.sbar = sbar_of_t(p.t, d);
    p.r = p.c * p.sbar / (d + 1) + (1.0 - p.t) - p.c * p.t * std::pow(1.0 - p.t, d);
    out.push_back(p);
  }
  return out;
}

}  // namespace htk::analytic
