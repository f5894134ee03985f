#ifndef BINRATIO_MODEL_HPP
#define BINRATIO_MODEL_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace binratio {

/// Raised when a parameter leaves its admissible domain.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for an ill-formed asymptotic regime (e.g. a non-positive ratio).
class RegimeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when exact enumeration would exceed its work budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exponents of the ratio x^s / (x + y)^r.
///
/// Unlike ModelParams this type does not insist on r, s > 0: the r = 0
/// path (R = X^s) is used by diagnostics that need a purely polynomial f.
struct Exponents {
  double r = 15.0;
  double s = 15.0;
};

/// Two independent binomials X ~ Bin(n, p), Y ~ Bin(m, p) and the exponents
/// of R = X^s / (X + Y)^r.
struct ModelParams {
  std::int64_t n = 1;
  std::int64_t m = 1;
  double p = 0.5;
  double s = 15.0;
  double r = 15.0;

  [[nodiscard]] Exponents exponents() const noexcept { return {r, s}; }

  void validate() const {
    if (n < 1) throw ParameterError("n must be >= 1, got " + std::to_string(n));
    if (m < 1) throw ParameterError("m must be >= 1, got " + std::to_string(m));
    if (!(p > 0.0 && p < 1.0))
      throw ParameterError("p must lie strictly inside (0, 1), got " + std::to_string(p));
    if (!(s > 0.0) || !std::isfinite(s))
      throw ParameterError("s must be a positive finite real, got " + std::to_string(s));
    if (!(r > 0.0) || !std::isfinite(r))
      throw ParameterError("r must be a positive finite real, got " + std::to_string(r));
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Asymptotic growth pattern of (n, m).
///
/// CaseI:    m/n -> inf with m log(m) n^{-3/2} -> 0
/// CaseII:   m/n -> alpha in (0, inf)
/// CaseIII:  m/n -> 0
/// Collapse: m/n -> inf with m log(m) n^{-3/2} not vanishing. No limit law is
///           proven here; CaseI scaling and variance are used as the target.
struct Regime {
  enum class Kind { CaseI, CaseII, CaseIII, Collapse };

  Kind kind = Kind::CaseII;
  double alpha = 1.0;  // meaningful for CaseII only

  static constexpr Regime case_i() noexcept { return {Kind::CaseI, 0.0}; }
  static constexpr Regime case_ii(double alpha) noexcept { return {Kind::CaseII, alpha}; }
  static constexpr Regime case_iii() noexcept { return {Kind::CaseIII, 0.0}; }
  static constexpr Regime collapse() noexcept { return {Kind::Collapse, 0.0}; }

  void validate() const {
    if (kind == Kind::CaseII && !(alpha > 0.0 && std::isfinite(alpha)))
      throw RegimeError("CaseII requires a positive finite alpha, got " + std::to_string(alpha));
  }

  friend bool operator==(const Regime&, const Regime&) = default;
};

inline std::string_view to_string(Regime::Kind kind) noexcept {
  switch (kind) {
    case Regime::Kind::CaseI: return "case1";
    case Regime::Kind::CaseII: return "case2";
    case Regime::Kind::CaseIII: return "case3";
    case Regime::Kind::Collapse: return "collapse";
  }
  return "unknown";
}

/// Parses "case1"/"case2"/"case3"/"collapse" (also "i", "ii", "iii").
inline Regime::Kind parse_regime_kind(std::string_view text) {
  if (text == "case1" || text == "i" || text == "I") return Regime::Kind::CaseI;
  if (text == "case2" || text == "ii" || text == "II") return Regime::Kind::CaseII;
  if (text == "case3" || text == "iii" || text == "III") return Regime::Kind::CaseIII;
  if (text == "collapse") return Regime::Kind::Collapse;
  throw RegimeError("unknown regime '" + std::string(text) + "'");
}

/// Centering, scaling and limiting variance of
///   T = scale * (R - center)  ->  N(0, variance).
///
/// center = n^s / (n + m)^r * p^(s - r) is the value of f at (np, mp). Both
/// center and scale are carried as logarithms because for r, s ~ 30 and
/// n ~ 1e9 neither fits in a double.
struct LimitLaw {
  double center = 0.0;  // exp(log_center); 0 or inf when not representable
  double log_center = 0.0;
  double log_scale = 0.0;
  double variance = 0.0;
  ModelParams params;
  Regime regime;
};

namespace detail {

// p^(2(s - r) - 1) (1 - p), the factor common to every case.
inline double variance_prefactor(double p, double s, double r) {
  return std::exp((2.0 * (s - r) - 1.0) * std::log(p)) * (1.0 - p);
}

inline double case_ii_variance(double p, double s, double r, double alpha) {
  const double lead = s * (1.0 + alpha) - r;
  const double bracket = lead * lead + alpha * r * r;
  // (1 + alpha)^{2(r + 1)} through log1p keeps the alpha -> 0 limit exact.
  return variance_prefactor(p, s, r) * bracket * std::exp(-2.0 * (r + 1.0) * std::log1p(alpha));
}

inline double case_i_variance(double p, double s, double r) {
  return variance_prefactor(p, s, r) * s * s;
}

inline double case_iii_variance(double p, double s, double r) {
  return variance_prefactor(p, s, r) * (s - r) * (s - r);
}

}  // namespace detail

/// Limit law of the standardized ratio for the given regime.
inline LimitLaw limit_law(const ModelParams& params, const Regime& regime) {
  params.validate();
  regime.validate();

  const double ln_n = std::log(static_cast<double>(params.n));
  const double ln_m = std::log(static_cast<double>(params.m));
  const double ln_nm = std::log(static_cast<double>(params.n) + static_cast<double>(params.m));
  const double s = params.s;
  const double r = params.r;
  const double p = params.p;

  LimitLaw law;
  law.params = params;
  law.regime = regime;
  law.log_center = s * ln_n - r * ln_nm + (s - r) * std::log(p);
  law.center = std::exp(law.log_center);

  switch (regime.kind) {
    case Regime::Kind::CaseI:
    case Regime::Kind::Collapse:
      law.log_scale = r * ln_m - (s - 0.5) * ln_n;
      law.variance = detail::case_i_variance(p, s, r);
      break;
    case Regime::Kind::CaseII:
      law.log_scale = (r - s + 0.5) * ln_n;
      law.variance = detail::case_ii_variance(p, s, r, regime.alpha);
      break;
    case Regime::Kind::CaseIII:
      law.log_scale = (r - s + 0.5) * ln_n;
      law.variance = detail::case_iii_variance(p, s, r);
      break;
  }
  return law;
}

/// (CaseII variance at alpha, CaseIII variance) for the same p, r, s.
///
/// The first tends to the second as alpha -> 0.
inline std::pair<double, double> variance_limit_consistency(const ModelParams& params, double alpha) {
  params.validate();
  Regime::case_ii(alpha).validate();
  return {detail::case_ii_variance(params.p, params.s, params.r, alpha),
          detail::case_iii_variance(params.p, params.s, params.r)};
}

}  // namespace binratio

#endif  // BINRATIO_MODEL_HPP
