#ifndef BINRATIO_CALCULUS_HPP
#define BINRATIO_CALCULUS_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "binratio/model.hpp"

namespace binratio {

/// Evaluation point of f(x, y) = x^s / (x + y)^r.
struct Point2 {
  double x = 1.0;
  double y = 0.0;

  void validate() const {
    if (!(x > 0.0) || !std::isfinite(x))
      throw ParameterError("f is evaluated at x > 0 only, got x = " + std::to_string(x));
    if (!(x + y > 0.0) || !std::isfinite(y))
      throw ParameterError("f requires x + y > 0, got y = " + std::to_string(y));
  }
};

/// Symmetric 2x2 Hessian, stored by its three distinct entries.
struct Hessian2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

struct Gradient2 {
  double dx = 0.0;
  double dy = 0.0;
};

inline double eval_log_f(const Point2& pt, double r, double s) {
  pt.validate();
  return s * std::log(pt.x) - r * std::log(pt.x + pt.y);
}

/// f(x, y). Throws std::overflow_error if the value leaves the double range;
/// callers working at large n must use eval_log_f.
inline double eval_f(const Point2& pt, double r, double s) {
  const double log_value = eval_log_f(pt, r, s);
  const double value = std::exp(log_value);
  if (!std::isfinite(value))
    throw std::overflow_error("f overflows a double at this point (log f = " +
                              std::to_string(log_value) + "); use eval_log_f");
  return value;
}

inline Gradient2 gradient(const Point2& pt, double r, double s) {
  pt.validate();
  const double z = pt.x + pt.y;
  // x^{s-1} (x+y)^{-r-1}
  const double common = std::exp((s - 1.0) * std::log(pt.x) - (r + 1.0) * std::log(z));
  return {common * (s * z - r * pt.x), -r * common * pt.x};
}

inline Hessian2 hessian(const Point2& pt, double r, double s) {
  pt.validate();
  const double x = pt.x;
  const double z = x + pt.y;
  const double prefactor = std::exp((s - 2.0) * std::log(x) - (r + 2.0) * std::log(z));
  const double rr1x2 = r * (r + 1.0) * x * x;
  const double rsxz = r * s * x * z;
  return {prefactor * (s * (s - 1.0) * z * z - 2.0 * rsxz + rr1x2),
          prefactor * (rr1x2 - rsxz),
          prefactor * rr1x2};
}

/// Sum of absolute entries. Dominates the largest Gerschgorin row sum and
/// hence the spectral norm of a symmetric matrix.
inline double gerschgorin_norm_bound(const Hessian2& h) noexcept {
  return std::abs(h.xx) + 2.0 * std::abs(h.xy) + std::abs(h.yy);
}

namespace detail {

// expm1(t) - t without cancellation near 0.
inline double expm1_minus_identity(double t) {
  if (std::abs(t) >= 0.1) return std::expm1(t) - t;
  double term = t * t / 2.0;
  double sum = term;
  for (int k = 3; k < 30; ++k) {
    term *= t / k;
    sum += term;
    if (std::abs(term) <= std::abs(sum) * 1e-18) break;
  }
  return sum;
}

// log1p(t) - t without cancellation near 0.
inline double log1p_minus_identity(double t) {
  if (std::abs(t) >= 0.1) return std::log1p(t) - t;
  double power = t * t;
  double sum = -power / 2.0;
  for (int k = 3; k < 40; ++k) {
    power *= -t;
    const double term = -power / k;
    sum += term;
    if (std::abs(term) <= std::abs(sum) * 1e-18) break;
  }
  return sum;
}

}  // namespace detail

/// Quadratic Taylor residual of f about an arbitrary expansion point, in
/// units of f(expansion):
///
///   Q / f(x0, y0) = expm1(D) - L,
///   D = s log(x/x0) - r log(z/z0),  L = s (x - x0)/x0 - r (z - z0)/z0.
///
/// Evaluated as (expm1(D) - D) + s (log1p(a) - a) - r (log1p(b) - b) so the
/// result keeps full relative precision when Q is much smaller than the
/// linear term. An observation with x = 0 takes f = 0 (and so does x + y = 0,
/// matching the sampling convention).
inline double relative_remainder(const Point2& expansion, const Exponents& e, double x_obs, double y_obs) {
  expansion.validate();
  if (!(x_obs >= 0.0) || !(y_obs >= 0.0))
    throw ParameterError("remainder observations must be nonnegative");
  const double x0 = expansion.x;
  const double z0 = expansion.x + expansion.y;
  const double a = (x_obs - x0) / x0;
  const double b = (x_obs + y_obs - z0) / z0;
  const double linear = e.s * a - e.r * b;
  if (x_obs == 0.0) return -1.0 - linear;
  const double log_ratio = e.s * std::log1p(a) - e.r * std::log1p(b);
  return detail::expm1_minus_identity(log_ratio) + e.s * detail::log1p_minus_identity(a) -
         e.r * detail::log1p_minus_identity(b);
}

/// Q(x, y) = f(x, y) - f(x0, y0) - grad f(x0, y0) . (x - x0, y - y0).
///
/// Accepts any real exponents, including r = 0.
inline double remainder_at(const Point2& expansion, const Exponents& e, double x_obs, double y_obs) {
  const double log_f0 = eval_log_f(expansion, e.r, e.s);
  return std::exp(log_f0) * relative_remainder(expansion, e, x_obs, y_obs);
}

inline Point2 expansion_point(const ModelParams& params) {
  return {static_cast<double>(params.n) * params.p, static_cast<double>(params.m) * params.p};
}

/// Taylor remainder of f about the mean point (np, mp).
inline double remainder(const ModelParams& params, double x_obs, double y_obs) {
  params.validate();
  return remainder_at(expansion_point(params), params.exponents(), x_obs, y_obs);
}

/// scale * Q(x, y) for the regime's scaling, computed without forming the
/// (possibly unrepresentable) scale or center separately.
inline double scaled_remainder(const LimitLaw& law, double x_obs, double y_obs) {
  return std::exp(law.log_scale + law.log_center) *
         relative_remainder(expansion_point(law.params), law.params.exponents(), x_obs, y_obs);
}

/// n^{s-2} log(n+m) / (n+m)^{r-1} times the regime's scaling factor, with the
/// unspecified constant set to 1. Only its trend in n, m is meaningful.
inline double scaled_remainder_bound(const ModelParams& params, const Regime& regime) {
  const LimitLaw law = limit_law(params, regime);
  const double n = static_cast<double>(params.n);
  const double nm = n + static_cast<double>(params.m);
  const double log_bound =
      (params.s - 2.0) * std::log(n) + std::log(std::log(nm)) - (params.r - 1.0) * std::log(nm);
  return std::exp(log_bound + law.log_scale);
}

}  // namespace binratio

#endif  // BINRATIO_CALCULUS_HPP
