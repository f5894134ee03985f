#ifndef BINRATIO_RUNNER_HPP
#define BINRATIO_RUNNER_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "binratio/calculus.hpp"
#include "binratio/divergence.hpp"
#include "binratio/model.hpp"
#include "binratio/parallel.hpp"
#include "binratio/sampling.hpp"

namespace binratio {

/// One simulated-vs-Normal comparison.
struct SingleRun {
  LimitLaw law;
  Comparison comparison;
  std::size_t samples = 0;
  std::size_t zero_numerator_count = 0;
  std::size_t zero_denominator_count = 0;
  SeedSpec seed;
  double wall_time_ms = 0.0;
};

/// Simulated batch, Normal reference with the limit-law variance, then KL.
/// Fully determined by the arguments (apart from wall_time_ms).
inline SingleRun run_single(const ModelParams& params, const Regime& regime, std::size_t samples,
                            std::size_t bins, Direction direction, const SeedSpec& seed) {
  const auto start = std::chrono::steady_clock::now();
  SingleRun run;
  run.law = limit_law(params, regime);
  const SampleBatch simulated = simulate_batch(params, regime, samples, seed);
  const SampleBatch reference = reference_normal_batch(run.law.variance, samples, seed);
  run.comparison = compare_batches_detailed(simulated, reference, direction, bins);
  run.samples = samples;
  run.zero_numerator_count = simulated.zero_numerator_count;
  run.zero_denominator_count = simulated.zero_denominator_count;
  run.seed = seed;
  run.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return run;
}

enum class VariedParam { P, S, R, M, N };

inline std::string_view to_string(VariedParam v) noexcept {
  switch (v) {
    case VariedParam::P: return "p";
    case VariedParam::S: return "s";
    case VariedParam::R: return "r";
    case VariedParam::M: return "m";
    case VariedParam::N: return "n";
  }
  return "?";
}

inline VariedParam parse_varied_param(std::string_view text) {
  if (text == "p") return VariedParam::P;
  if (text == "s") return VariedParam::S;
  if (text == "r") return VariedParam::R;
  if (text == "m") return VariedParam::M;
  if (text == "n") return VariedParam::N;
  throw ParameterError("cannot vary '" + std::string(text) + "'; expected one of p, s, r, m, n");
}

/// Evenly spaced grid lo..hi with `steps` points (steps = 1 gives {lo}).
/// Descending ranges are allowed.
struct GridRange {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t steps = 1;

  [[nodiscard]] std::vector<double> values() const {
    if (steps == 0) throw ParameterError("grid needs at least one step");
    std::vector<double> out(steps);
    if (steps == 1) return {lo};
    const auto last = static_cast<double>(steps - 1);
    // Weighted form keeps both endpoints exact.
    for (std::size_t i = 0; i < steps; ++i) {
      const auto k = static_cast<double>(i);
      out[i] = (lo * (last - k) + hi * k) / last;
    }
    return out;
  }
};

struct SweepSpec {
  std::string name;
  ModelParams base;
  Regime regime;
  // CaseII only: recompute alpha = m/n at every grid point.
  bool alpha_tracks_ratio = false;
  VariedParam vary = VariedParam::P;
  std::variant<std::vector<double>, GridRange> grid = std::vector<double>{};
  std::size_t replicates_per_point = 1;
  std::size_t samples = 100'000;
  std::size_t bins = 100;
  Direction direction = Direction::Auto;
  std::uint64_t master_seed = 20250101;
  // Non-fatal notes about the spec (e.g. a range recorded verbatim).
  std::vector<std::string> warnings;

  [[nodiscard]] std::vector<double> grid_values() const {
    if (const auto* list = std::get_if<std::vector<double>>(&grid)) return *list;
    return std::get<GridRange>(grid).values();
  }
};

struct SweepRow {
  VariedParam varied_param = VariedParam::P;
  double varied_value = 0.0;
  double kl = 0.0;
  Direction direction = Direction::Forward;
  std::size_t smoothed_bins = 0;
  std::size_t zero_denominator_count = 0;
  std::uint64_t seed = 0;  // stream index of this row under the spec's master seed
  double wall_time_ms = 0.0;

  /// Equality on every field except wall time.
  [[nodiscard]] bool same_outcome(const SweepRow& o) const noexcept {
    return varied_param == o.varied_param && varied_value == o.varied_value && kl == o.kl &&
           direction == o.direction && smoothed_bins == o.smoothed_bins &&
           zero_denominator_count == o.zero_denominator_count && seed == o.seed;
  }
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::string> warnings;
};

struct SweepPoint {
  ModelParams params;
  Regime regime;
  double varied_value = 0.0;
};

/// Applies one grid value to the base parameters and validates the result.
inline SweepPoint sweep_point(const SweepSpec& spec, double value) {
  SweepPoint pt{spec.base, spec.regime, value};
  switch (spec.vary) {
    case VariedParam::P: pt.params.p = value; break;
    case VariedParam::S: pt.params.s = value; break;
    case VariedParam::R: pt.params.r = value; break;
    case VariedParam::M: pt.params.m = std::llround(value); break;
    case VariedParam::N: pt.params.n = std::llround(value); break;
  }
  if (spec.alpha_tracks_ratio && pt.regime.kind == Regime::Kind::CaseII)
    pt.regime.alpha = static_cast<double>(pt.params.m) / static_cast<double>(pt.params.n);
  pt.params.validate();
  pt.regime.validate();
  return pt;
}

/// Runs every (grid point x replicate), `threads` at a time (0 = hardware).
/// Each row's stream index is point_index * replicates + replicate, so the
/// result is identical for any thread count.
inline SweepResult run_sweep(const SweepSpec& spec, std::size_t threads = 0) {
  const auto values = spec.grid_values();
  if (values.empty()) throw ParameterError("sweep grid is empty");
  if (spec.replicates_per_point < 1) throw ParameterError("replicates_per_point must be >= 1");
  if (spec.samples < 1) throw ParameterError("samples must be >= 1");
  if (spec.bins < 2) throw ParameterError("bins must be >= 2");

  std::vector<SweepPoint> points;
  points.reserve(values.size());
  for (double v : values) points.push_back(sweep_point(spec, v));

  const std::size_t reps = spec.replicates_per_point;
  SweepResult result;
  result.warnings = spec.warnings;
  result.rows.resize(points.size() * reps);
  parallel_for(result.rows.size(), threads, [&](std::size_t task) {
    const SweepPoint& pt = points[task / reps];
    const SeedSpec seed{spec.master_seed, static_cast<std::uint64_t>(task)};
    const SingleRun run = run_single(pt.params, pt.regime, spec.samples, spec.bins, spec.direction, seed);
    SweepRow& row = result.rows[task];
    row.varied_param = spec.vary;
    row.varied_value = pt.varied_value;
    row.kl = run.comparison.report.kl;
    row.direction = run.comparison.report.direction;
    row.smoothed_bins = run.comparison.report.smoothed_bins;
    row.zero_denominator_count = run.zero_denominator_count;
    row.seed = seed.stream_index;
    row.wall_time_ms = run.wall_time_ms;
  });
  return result;
}

/// Quantiles of |scale * Q(X, Y)| next to the analytic bound.
struct BoundDiagnostics {
  ModelParams params;
  Regime regime;
  double bound = 0.0;  // NaN on the unchecked-exponent path
  double q50 = 0.0;
  double q99 = 0.0;
  double q100 = 0.0;
  std::size_t samples = 0;
};

namespace detail {

// Nearest-rank quantile; sorts `values`.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  const auto n = sorted.size();
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

inline BoundDiagnostics remainder_quantiles(std::int64_t n, std::int64_t m, double p, const Exponents& e,
                                            double log_magnitude, std::size_t samples, const SeedSpec& seed) {
  if (samples < 1) throw ParameterError("samples must be >= 1");
  const BinomialDistribution bin_x(n, p);
  const BinomialDistribution bin_y(m, p);
  Engine gen_x = make_engine(seed, StreamRole::BinomialX);
  Engine gen_y = make_engine(seed, StreamRole::BinomialY);
  const Point2 expansion{static_cast<double>(n) * p, static_cast<double>(m) * p};
  const double magnitude = std::exp(log_magnitude);
  std::vector<double> q(samples);
  for (auto& v : q) {
    const auto x = static_cast<double>(bin_x(gen_x));
    const auto y = static_cast<double>(bin_y(gen_y));
    v = std::abs(magnitude * relative_remainder(expansion, e, x, y));
  }
  std::sort(q.begin(), q.end());
  BoundDiagnostics d;
  d.q50 = quantile_sorted(q, 0.50);
  d.q99 = quantile_sorted(q, 0.99);
  d.q100 = q.back();
  d.samples = samples;
  return d;
}

}  // namespace detail

/// Empirical |scale * Q(X, Y)| quantiles (50/99/100%) over `samples` draws,
/// using the same X/Y streams as simulate_batch for this seed.
inline BoundDiagnostics run_bound_diagnostics(const ModelParams& params, const Regime& regime, std::size_t samples,
                                              const SeedSpec& seed) {
  const LimitLaw law = limit_law(params, regime);
  BoundDiagnostics d = detail::remainder_quantiles(params.n, params.m, params.p, params.exponents(),
                                                   law.log_scale + law.log_center, samples, seed);
  d.params = params;
  d.regime = regime;
  d.bound = scaled_remainder_bound(params, regime);
  return d;
}

/// Same diagnostics for arbitrary exponents (e.g. r = 0) and an explicit
/// log scaling factor. No analytic bound is reported.
inline BoundDiagnostics run_bound_diagnostics_unchecked(std::int64_t n, std::int64_t m, double p,
                                                        const Exponents& e, double log_scale, std::size_t samples,
                                                        const SeedSpec& seed) {
  const Point2 expansion{static_cast<double>(n) * p, static_cast<double>(m) * p};
  const double log_f0 = eval_log_f(expansion, e.r, e.s);
  BoundDiagnostics d = detail::remainder_quantiles(n, m, p, e, log_scale + log_f0, samples, seed);
  d.params = ModelParams{n, m, p, e.s, e.r};
  d.bound = std::nan("");
  return d;
}

}  // namespace binratio

#endif  // BINRATIO_RUNNER_HPP
