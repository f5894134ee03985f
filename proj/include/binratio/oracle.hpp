#ifndef BINRATIO_ORACLE_HPP
#define BINRATIO_ORACLE_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/binomial.hpp>

#include "binratio/model.hpp"
#include "binratio/parallel.hpp"
#include "binratio/sampling.hpp"

namespace binratio {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct SupportPoint {
  double value = 0.0;
  double probability = 0.0;
};

/// Exact law of R (or of T) from full enumeration of (X, Y).
struct ExactDistribution {
  std::vector<SupportPoint> support;  // empty when elided
  bool support_elided = false;
  double mean = 0.0;
  double variance = 0.0;
  double total_probability = 0.0;
  std::size_t outcomes = 0;
};

struct OracleOptions {
  std::uint64_t budget = 100'000'000;     // max (n + 1)(m + 1)
  std::uint64_t support_limit = 1'000'000;  // keep support up to this many outcomes
  std::size_t threads = 1;
};

/// Binomial(n, p) pmf over 0..n.
///
/// Boost.Math evaluates it through the incomplete-beta derivative with
/// Lanczos gamma ratios, which keeps each term within a few ulps; plain
/// lgamma differences lose ~1e-12 relative at n ~ 1e3.
inline std::vector<double> binomial_pmf(std::int64_t n, double p) {
  const boost::math::binomial_distribution<double> dist(static_cast<double>(n), p);
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
  for (std::int64_t k = 0; k <= n; ++k) pmf[static_cast<std::size_t>(k)] = boost::math::pdf(dist, static_cast<double>(k));
  return pmf;
}

namespace detail {

template <class Statistic>
ExactDistribution enumerate_joint(std::int64_t n, std::int64_t m, double p, const OracleOptions& opt,
                                  Statistic&& statistic) {
  if (n < 0 || m < 0) throw ParameterError("trial counts must be nonnegative");
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("p must lie strictly inside (0, 1)");
  const auto outcomes = static_cast<std::uint64_t>(n + 1) * static_cast<std::uint64_t>(m + 1);
  if (outcomes > opt.budget)
    throw BudgetError("exact enumeration needs " + std::to_string(outcomes) + " outcomes, budget is " +
                      std::to_string(opt.budget) + "; use Monte Carlo (simulate) instead");

  const auto px = binomial_pmf(n, p);
  const auto py = binomial_pmf(m, p);
  const auto strata = static_cast<std::size_t>(n) + 1;
  const auto width = static_cast<std::size_t>(m) + 1;

  // Per-stratum partial sums, reduced in stratum order afterwards so the
  // result does not depend on the thread count.
  std::vector<double> prob_part(strata), mean_part(strata), var_part(strata);
  const bool keep = outcomes <= opt.support_limit;
  ExactDistribution dist;
  dist.outcomes = static_cast<std::size_t>(outcomes);
  dist.support_elided = !keep;
  if (keep) dist.support.resize(dist.outcomes);

  parallel_for(strata, opt.threads, [&](std::size_t x) {
    CompensatedSum prob, first;
    for (std::size_t y = 0; y < width; ++y) {
      const double w = px[x] * py[y];
      const double v = statistic(static_cast<std::int64_t>(x), static_cast<std::int64_t>(y));
      prob.add(w);
      first.add(w * v);
      if (keep) dist.support[x * width + y] = {v, w};
    }
    prob_part[x] = prob.value();
    mean_part[x] = first.value();
  });
  CompensatedSum total, mean;
  for (std::size_t x = 0; x < strata; ++x) {
    total.add(prob_part[x]);
    mean.add(mean_part[x]);
  }
  dist.total_probability = total.value();
  dist.mean = mean.value() / dist.total_probability;

  const double mu = dist.mean;
  parallel_for(strata, opt.threads, [&](std::size_t x) {
    CompensatedSum second;
    for (std::size_t y = 0; y < width; ++y) {
      const double w = px[x] * py[y];
      const double d = statistic(static_cast<std::int64_t>(x), static_cast<std::int64_t>(y)) - mu;
      second.add(w * d * d);
    }
    var_part[x] = second.value();
  });
  CompensatedSum var;
  for (std::size_t x = 0; x < strata; ++x) var.add(var_part[x]);
  dist.variance = var.value() / dist.total_probability;
  return dist;
}

}  // namespace detail

/// Exact distribution of R = X^s / (X + Y)^r for arbitrary exponents,
/// including r = 0. R is taken as 0 whenever X = 0.
inline ExactDistribution exact_distribution_raw(std::int64_t n, std::int64_t m, double p, const Exponents& e,
                                                const OracleOptions& opt = {}) {
  return detail::enumerate_joint(n, m, p, opt, [&](std::int64_t x, std::int64_t y) {
    if (x == 0) return 0.0;
    return std::exp(e.s * std::log(static_cast<double>(x)) - e.r * std::log(static_cast<double>(x + y)));
  });
}

/// Exact distribution of R, or of the standardized T when a regime is given.
inline ExactDistribution exact_distribution(const ModelParams& params, const std::optional<Regime>& standardize,
                                            const OracleOptions& opt = {}) {
  params.validate();
  if (!standardize) return exact_distribution_raw(params.n, params.m, params.p, params.exponents(), opt);
  const LimitLaw law = limit_law(params, *standardize);
  return detail::enumerate_joint(params.n, params.m, params.p, opt,
                                 [&](std::int64_t x, std::int64_t y) { return standardized_statistic(x, y, law); });
}

struct ConvergenceRow {
  double scale = 1.0;
  std::int64_t n = 0;
  std::int64_t m = 0;
  double exact_mean = 0.0;
  double exact_variance = 0.0;
  double theory_variance = 0.0;
  // |exact - theory| / theory, or |exact| when the theory variance is 0.
  double relative_error = 0.0;
};

/// Exact standardized variance against the limit law at (n k, m k).
inline std::vector<ConvergenceRow> exact_vs_theory_convergence(const ModelParams& base, const Regime& regime,
                                                               std::span<const double> scale_factors,
                                                               const OracleOptions& opt = {}) {
  std::vector<ConvergenceRow> rows;
  rows.reserve(scale_factors.size());
  for (double k : scale_factors) {
    if (!(k > 0.0)) throw ParameterError("scale factors must be positive");
    ModelParams scaled = base;
    scaled.n = std::llround(static_cast<double>(base.n) * k);
    scaled.m = std::llround(static_cast<double>(base.m) * k);
    const LimitLaw law = limit_law(scaled, regime);
    const ExactDistribution exact = exact_distribution(scaled, regime, opt);
    ConvergenceRow row;
    row.scale = k;
    row.n = scaled.n;
    row.m = scaled.m;
    row.exact_mean = exact.mean;
    row.exact_variance = exact.variance;
    row.theory_variance = law.variance;
    row.relative_error = law.variance > 0.0 ? std::abs(exact.variance - law.variance) / law.variance
                                            : std::abs(exact.variance);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace binratio

#endif  // BINRATIO_ORACLE_HPP
