#ifndef BINRATIO_SAMPLING_HPP
#define BINRATIO_SAMPLING_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "binratio/model.hpp"
#include "binratio/rng.hpp"

namespace binratio {

/// Exact Binomial(n, p) variates in O(1) expected time.
///
/// Small means (n * min(p, 1-p) < 10) use inversion by summing geometric
/// waiting times; otherwise Hormann's BTRS transformed rejection with
/// squeeze. The acceptance test uses the exact log pmf ratio, written with
/// log1p so that it keeps its precision at n ~ 1e9.
class BinomialDistribution {
 public:
  BinomialDistribution(std::int64_t n, double p) : n_(n), p_(p) {
    if (n < 1) throw ParameterError("binomial n must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw ParameterError("binomial p must lie in (0, 1)");
    flipped_ = p > 0.5;
    q_ = flipped_ ? 1.0 - p : p;
    const double nd = static_cast<double>(n_);
    use_inversion_ = nd * q_ < 10.0;
    if (use_inversion_) {
      log1m_q_ = std::log1p(-q_);
      return;
    }
    const double spq = std::sqrt(nd * q_ * (1.0 - q_));
    b_ = 1.15 + 2.53 * spq;
    a_ = -0.0873 + 0.0248 * b_ + 0.01 * q_;
    c_ = nd * q_ + 0.5;
    v_r_ = 0.92 - 4.2 / b_;
    alpha_ = (2.83 + 5.1 / b_) * spq;
    lpq_ = std::log(q_ / (1.0 - q_));
    mode_ = std::floor((nd + 1.0) * q_);
    h_ = stirling_tail(mode_) + stirling_tail(nd - mode_);
  }

  [[nodiscard]] std::int64_t n() const noexcept { return n_; }
  [[nodiscard]] double p() const noexcept { return p_; }

  template <class URBG>
  std::int64_t operator()(URBG& gen) const {
    const std::int64_t k = use_inversion_ ? inversion(gen) : btrs(gen);
    return flipped_ ? n_ - k : k;
  }

 private:
  // log(k!) - [(k + 1/2) log(k + 1) - (k + 1) + log(2 pi)/2]
  static double stirling_tail(double k) {
    static constexpr std::array<double, 10> table = {
        0.0810614667953272,  0.0413406959554092,  0.0276779256849983, 0.02079067210376509,
        0.0166446911898211,  0.0138761288230707,  0.0118967099458917, 0.0104112652619720,
        0.00925546218271273, 0.00833056343336287};
    if (k <= 9.0) return table[static_cast<std::size_t>(k)];
    const double kp1sq = (k + 1.0) * (k + 1.0);
    return (1.0 / 12 - (1.0 / 360 - 1.0 / 1260 / kp1sq) / kp1sq) / (k + 1.0);
  }

  template <class URBG>
  std::int64_t inversion(URBG& gen) const {
    const double nd = static_cast<double>(n_);
    double trials = 0.0;
    std::int64_t successes = 0;
    for (;;) {
      trials += std::ceil(std::log(uniform_open01(gen)) / log1m_q_);
      if (trials > nd) return successes;
      ++successes;
    }
  }

  // log f(k) - log f(mode) for the Binomial(n, q) pmf f.
  [[nodiscard]] double log_pmf_ratio(double k) const {
    const double nd = static_cast<double>(n_);
    const double m = mode_;
    const double d = k - m;
    const double log_ak = std::log((k + 1.0) / (nd - k + 1.0)) - lpq_;
    return (m + 0.5) * std::log1p(-d / (k + 1.0)) + (nd - m + 0.5) * std::log1p(d / (nd - k + 1.0)) -
           d * log_ak + h_ - stirling_tail(k) - stirling_tail(nd - k);
  }

  template <class URBG>
  std::int64_t btrs(URBG& gen) const {
    const double nd = static_cast<double>(n_);
    for (;;) {
      const double u = uniform_open01(gen) - 0.5;
      double v = uniform_open01(gen);
      const double us = 0.5 - std::abs(u);
      const double k = std::floor((2.0 * a_ / us + b_) * u + c_);
      if (k < 0.0 || k > nd) continue;
      if (us >= 0.07 && v <= v_r_) return static_cast<std::int64_t>(k);
      v = std::log(v * alpha_ / (a_ / (us * us) + b_));
      if (v <= log_pmf_ratio(k)) return static_cast<std::int64_t>(k);
    }
  }

  std::int64_t n_;
  double p_;
  double q_ = 0.0;
  bool flipped_ = false;
  bool use_inversion_ = true;
  double log1m_q_ = 0.0;
  double a_ = 0.0, b_ = 0.0, c_ = 0.0, v_r_ = 0.0, alpha_ = 0.0, lpq_ = 0.0, mode_ = 0.0, h_ = 0.0;
};

template <class URBG>
std::int64_t draw_binomial(std::int64_t n, double p, URBG& gen) {
  return BinomialDistribution(n, p)(gen);
}

/// T = scale * (R - center) evaluated as
///   exp(log_scale + log_center) * expm1(D),  D = log R - log_center,
/// with D split as (s - r) log(x/x0) + r log((x z0)/(z x0)). The second
/// log argument is 1 + (x m - y n) / ((x + y) n), whose numerator is an
/// exact integer, so near-cancelling draws keep their relative precision.
///
/// x = 0 gives R = 0 and T = -exp(log_scale + log_center); x + y = 0 follows
/// the same convention.
inline double standardized_statistic(std::int64_t x, std::int64_t y, const LimitLaw& law) {
  const double magnitude = std::exp(law.log_scale + law.log_center);
  if (x <= 0) return -magnitude;
  const ModelParams& prm = law.params;
  using ld = long double;
  const ld x0 = static_cast<ld>(prm.n) * static_cast<ld>(prm.p);
  const ld cross = static_cast<ld>(x) * static_cast<ld>(prm.m) - static_cast<ld>(y) * static_cast<ld>(prm.n);
  const ld denom = (static_cast<ld>(x) + static_cast<ld>(y)) * static_cast<ld>(prm.n);
  // The two logs can be O(1) and cancel; extended precision absorbs that.
  const ld delta = static_cast<ld>(prm.s - prm.r) * std::log1p((static_cast<ld>(x) - x0) / x0) +
                   static_cast<ld>(prm.r) * std::log1p(cross / denom);
  return static_cast<double>(static_cast<ld>(magnitude) * std::expm1(delta));
}

/// Standardized Monte Carlo draws with degenerate-draw diagnostics.
///
/// params/regime are empty for Normal reference batches.
struct SampleBatch {
  std::vector<double> values;
  std::size_t count = 0;
  std::size_t zero_numerator_count = 0;
  std::size_t zero_denominator_count = 0;
  std::optional<ModelParams> params;
  std::optional<Regime> regime;
};

inline SampleBatch simulate_batch(const ModelParams& params, const Regime& regime, std::size_t count,
                                  const SeedSpec& seed) {
  if (count < 1) throw ParameterError("batch count must be >= 1");
  const LimitLaw law = limit_law(params, regime);
  const BinomialDistribution bin_x(params.n, params.p);
  const BinomialDistribution bin_y(params.m, params.p);
  Engine gen_x = make_engine(seed, StreamRole::BinomialX);
  Engine gen_y = make_engine(seed, StreamRole::BinomialY);

  SampleBatch batch;
  batch.values.reserve(count);
  batch.params = params;
  batch.regime = regime;
  for (std::size_t i = 0; i < count; ++i) {
    const std::int64_t x = bin_x(gen_x);
    const std::int64_t y = bin_y(gen_y);
    if (x == 0) {
      ++batch.zero_numerator_count;
      if (y == 0) ++batch.zero_denominator_count;
    }
    batch.values.push_back(standardized_statistic(x, y, law));
  }
  batch.count = batch.values.size();
  return batch;
}

/// iid N(0, variance) draws; variance 0 gives an all-zero batch.
inline SampleBatch reference_normal_batch(double variance, std::size_t count, const SeedSpec& seed) {
  if (!(variance >= 0.0) || !std::isfinite(variance))
    throw ParameterError("reference variance must be finite and >= 0");
  if (count < 1) throw ParameterError("batch count must be >= 1");
  SampleBatch batch;
  batch.values.assign(count, 0.0);
  batch.count = count;
  if (variance > 0.0) {
    Engine gen = make_engine(seed, StreamRole::NormalReference);
    std::normal_distribution<double> normal(0.0, std::sqrt(variance));
    for (double& v : batch.values) v = normal(gen);
  }
  return batch;
}

}  // namespace binratio

#endif  // BINRATIO_SAMPLING_HPP
