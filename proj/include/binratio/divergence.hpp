#ifndef BINRATIO_DIVERGENCE_HPP
#define BINRATIO_DIVERGENCE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "binratio/model.hpp"
#include "binratio/sampling.hpp"

namespace binratio {

class BinningError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Forward is D(A || B) with A the simulated and B the reference sample;
/// Reversed is D(B || A). Auto resolves to Reversed for the Collapse regime
/// and Forward otherwise.
enum class Direction { Forward, Reversed, Auto };

inline std::string_view to_string(Direction d) noexcept {
  switch (d) {
    case Direction::Forward: return "forward";
    case Direction::Reversed: return "reversed";
    case Direction::Auto: return "auto";
  }
  return "unknown";
}

inline Direction parse_direction(std::string_view text) {
  if (text == "forward") return Direction::Forward;
  if (text == "reversed" || text == "reverse") return Direction::Reversed;
  if (text == "auto") return Direction::Auto;
  throw std::invalid_argument("unknown KL direction '" + std::string(text) + "'");
}

inline Direction resolve_direction(Direction requested, const std::optional<Regime>& regime) noexcept {
  if (requested != Direction::Auto) return requested;
  return regime && regime->kind == Regime::Kind::Collapse ? Direction::Reversed : Direction::Forward;
}

struct Histogram {
  std::vector<double> edges;  // bin_count + 1, strictly increasing
  std::vector<double> mass;   // bin_count, sums to 1
  std::vector<std::size_t> counts;
  std::size_t total = 0;
  std::size_t undercount = 0;  // values below edges.front()
  std::size_t overcount = 0;   // values above edges.back()

  [[nodiscard]] std::size_t bin_count() const noexcept { return mass.size(); }
};

struct DivergenceReport {
  double kl = 0.0;
  Direction direction = Direction::Forward;
  std::size_t smoothed_bins = 0;
  std::size_t bin_count = 0;
};

/// Equal-width edges over the pooled [min, max] of both samples. A
/// zero-width pooled range is widened to [min - 1/2, min + 1/2].
inline std::vector<double> common_bins(std::span<const double> a, std::span<const double> b,
                                       std::size_t bin_count = 100) {
  if (a.empty() || b.empty()) throw BinningError("cannot bin an empty sample");
  if (bin_count < 2) throw BinningError("need at least 2 bins");
  const auto [a_lo, a_hi] = std::minmax_element(a.begin(), a.end());
  const auto [b_lo, b_hi] = std::minmax_element(b.begin(), b.end());
  double lo = std::min(*a_lo, *b_lo);
  double hi = std::max(*a_hi, *b_hi);
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw BinningError("sample contains non-finite values");
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double span = hi - lo;
  const auto bins = static_cast<double>(bin_count);
  std::vector<double> edges(bin_count + 1);
  // span * i / bins: doubling bin_count reproduces every old edge exactly.
  for (std::size_t i = 0; i < bin_count; ++i) edges[i] = lo + (span * static_cast<double>(i)) / bins;
  edges[bin_count] = hi;
  for (std::size_t i = 1; i <= bin_count; ++i)
    if (!(edges[i] > edges[i - 1]))
      throw BinningError("pooled range too narrow for " + std::to_string(bin_count) + " distinct bins");
  return edges;
}

inline std::vector<double> common_bins(const SampleBatch& a, const SampleBatch& b, std::size_t bin_count = 100) {
  return common_bins(std::span<const double>(a.values), std::span<const double>(b.values), bin_count);
}

/// Bins are half-open [e_i, e_{i+1}) except the last, which includes its
/// right edge.
inline Histogram make_histogram(std::span<const double> values, std::vector<double> edges) {
  if (edges.size() < 3) throw BinningError("histogram needs at least 2 bins");
  if (values.empty()) throw BinningError("cannot histogram an empty sample");
  Histogram h;
  const std::size_t bins = edges.size() - 1;
  h.counts.assign(bins, 0);
  for (double v : values) {
    if (v < edges.front()) {
      ++h.undercount;
      continue;
    }
    if (v > edges.back()) {
      ++h.overcount;
      continue;
    }
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    std::size_t idx = static_cast<std::size_t>(it - edges.begin()) - 1;
    if (idx >= bins) idx = bins - 1;
    ++h.counts[idx];
  }
  h.total = values.size();
  h.mass.resize(bins);
  const double n = static_cast<double>(h.total);
  for (std::size_t i = 0; i < bins; ++i) h.mass[i] = static_cast<double>(h.counts[i]) / n;
  h.edges = std::move(edges);
  return h;
}

/// Discrete KL divergence between two histograms on identical edges.
///
/// 0 log 0 := 0. Where the numerator distribution has mass and the
/// denominator has none, the denominator mass is replaced by 1/(2N), N the
/// denominator's sample size, and the bin is counted in smoothed_bins.
inline DivergenceReport kl_divergence(const Histogram& a, const Histogram& b, Direction direction) {
  if (direction == Direction::Auto) throw std::invalid_argument("kl_divergence needs a resolved direction");
  if (a.edges != b.edges) throw BinningError("histograms must share identical edges");
  const Histogram& num = direction == Direction::Forward ? a : b;
  const Histogram& den = direction == Direction::Forward ? b : a;
  const double floor_mass = 1.0 / (2.0 * static_cast<double>(den.total));

  DivergenceReport report;
  report.direction = direction;
  report.bin_count = num.bin_count();
  double sum = 0.0;
  for (std::size_t i = 0; i < num.bin_count(); ++i) {
    const double pa = num.mass[i];
    if (pa == 0.0) continue;
    double pb = den.mass[i];
    if (pb == 0.0) {
      pb = floor_mass;
      ++report.smoothed_bins;
    }
    sum += pa * (std::log(pa) - std::log(pb));
  }
  report.kl = sum;
  return report;
}

struct Comparison {
  Histogram simulated;
  Histogram reference;
  DivergenceReport report;
};

/// Common binning, both histograms, then KL in the requested direction.
inline Comparison compare_batches_detailed(const SampleBatch& a, const SampleBatch& b, Direction direction,
                                           std::size_t bin_count = 100) {
  auto edges = common_bins(a, b, bin_count);
  Comparison c;
  c.simulated = make_histogram(a.values, edges);
  c.reference = make_histogram(b.values, std::move(edges));
  c.report = kl_divergence(c.simulated, c.reference, resolve_direction(direction, a.regime));
  return c;
}

inline DivergenceReport compare_batches(const SampleBatch& a, const SampleBatch& b, Direction direction,
                                        std::size_t bin_count = 100) {
  return compare_batches_detailed(a, b, direction, bin_count).report;
}

}  // namespace binratio

#endif  // BINRATIO_DIVERGENCE_HPP
