#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "binratio/io.hpp"
#include "binratio/presets.hpp"
#include "binratio/runner.hpp"

using namespace binratio;

namespace {

SweepSpec small_case_ii_sweep() {
  SweepSpec spec;
  spec.name = "t";
  spec.base = {1'000'000, 1'000'000, 0.5, 15.0, 15.0};
  spec.regime = Regime::case_ii(1.0);
  spec.vary = VariedParam::R;
  spec.grid = std::vector<double>{5.0, 15.0, 25.0};
  spec.replicates_per_point = 2;
  spec.samples = 20'000;
  return spec;
}

}  // namespace

TEST(RunSingle, CaseTwoIsClose) {
  const auto run = run_single({1'000'000, 1'000'000, 0.5, 15.0, 15.0}, Regime::case_ii(1.0), 100'000, 100,
                              Direction::Auto, {20250101, 0});
  EXPECT_EQ(run.comparison.report.direction, Direction::Forward);
  EXPECT_LT(run.comparison.report.kl, 0.05);
  EXPECT_EQ(run.zero_denominator_count, 0u);
}

TEST(RunSingle, CollapseIsFar) {
  const auto run = run_single({200'000, 2'000'000'000, 0.5, 15.0, 15.0}, Regime::collapse(), 100'000, 100,
                              Direction::Reversed, {20250101, 0});
  EXPECT_EQ(run.comparison.report.direction, Direction::Reversed);
  EXPECT_GT(run.comparison.report.kl, 1.0);
}

TEST(RunSingle, CaseThreeDefaultsAreClose) {
  const auto run = run_single({1'100'000'000, 3'800'000, 0.5, 16.0, 15.0}, Regime::case_iii(), 100'000, 100,
                              Direction::Auto, {20250101, 0});
  EXPECT_LT(run.comparison.report.kl, 0.05);
}

TEST(RunSingle, DeterministicUnderSeed) {
  const ModelParams prm{5000, 7000, 0.3, 3.0, 2.0};
  const auto a = run_single(prm, Regime::case_ii(1.4), 5000, 50, Direction::Auto, {7, 3});
  const auto b = run_single(prm, Regime::case_ii(1.4), 5000, 50, Direction::Auto, {7, 3});
  EXPECT_EQ(a.comparison.report.kl, b.comparison.report.kl);
  EXPECT_EQ(a.comparison.simulated.mass, b.comparison.simulated.mass);
  EXPECT_EQ(a.comparison.reference.mass, b.comparison.reference.mass);
}

TEST(RunSingle, SeedStabilityAtCaseTwo) {
  const ModelParams prm{1'000'000, 1'000'000, 0.5, 15.0, 15.0};
  const auto a = run_single(prm, Regime::case_ii(1.0), 100'000, 100, Direction::Auto, {1, 0});
  const auto b = run_single(prm, Regime::case_ii(1.0), 100'000, 100, Direction::Auto, {2, 0});
  EXPECT_NE(a.comparison.report.kl, b.comparison.report.kl);
  EXPECT_LT(std::abs(a.comparison.report.kl - b.comparison.report.kl), 0.02);
}

TEST(Grid, RangeValues) {
  const auto v = GridRange{1.0, 30.0, 30}.values();
  ASSERT_EQ(v.size(), 30u);
  EXPECT_EQ(v.front(), 1.0);
  EXPECT_EQ(v.back(), 30.0);
  EXPECT_EQ(v[14], 15.0);
  const auto d = GridRange{2.8e6, 1.2e6, 11}.values();
  EXPECT_EQ(d.front(), 2.8e6);
  EXPECT_EQ(d.back(), 1.2e6);
  EXPECT_TRUE(std::is_sorted(d.rbegin(), d.rend()));
  EXPECT_EQ(GridRange({0.3, 0.9, 1}).values(), std::vector<double>{0.3});
}

TEST(Sweep, OnePointEqualsRunSingle) {
  SweepSpec spec = small_case_ii_sweep();
  spec.grid = std::vector<double>{12.0};
  spec.replicates_per_point = 1;
  const auto result = run_sweep(spec, 1);
  ASSERT_EQ(result.rows.size(), 1u);
  ModelParams prm = spec.base;
  prm.r = 12.0;
  const auto run = run_single(prm, spec.regime, spec.samples, spec.bins, spec.direction, {spec.master_seed, 0});
  EXPECT_EQ(result.rows[0].kl, run.comparison.report.kl);
  EXPECT_EQ(result.rows[0].smoothed_bins, run.comparison.report.smoothed_bins);
  EXPECT_EQ(result.rows[0].seed, 0u);
  EXPECT_EQ(result.rows[0].varied_value, 12.0);
}

TEST(Sweep, RowsInGridOrderWithReplicates) {
  const auto result = run_sweep(small_case_ii_sweep(), 3);
  ASSERT_EQ(result.rows.size(), 6u);
  const std::vector<double> expect{5, 5, 15, 15, 25, 25};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(result.rows[i].varied_value, expect[i]);
    EXPECT_EQ(result.rows[i].seed, i);
    EXPECT_EQ(result.rows[i].varied_param, VariedParam::R);
  }
  EXPECT_NE(result.rows[0].kl, result.rows[1].kl);
}

TEST(Sweep, IdenticalAcrossThreadCounts) {
  const auto spec = small_case_ii_sweep();
  const auto serial = run_sweep(spec, 1);
  const auto parallel = run_sweep(spec, 4);
  ASSERT_EQ(serial.rows.size(), parallel.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) EXPECT_TRUE(serial.rows[i].same_outcome(parallel.rows[i]));
}

TEST(Sweep, InvalidPointFailsBeforeRunning) {
  SweepSpec spec = small_case_ii_sweep();
  spec.vary = VariedParam::P;
  spec.grid = std::vector<double>{0.2, 0.5, 1.0};
  EXPECT_THROW(run_sweep(spec), ParameterError);
  spec.grid = std::vector<double>{};
  EXPECT_THROW(run_sweep(spec), ParameterError);
  spec.vary = VariedParam::R;
  spec.grid = std::vector<double>{-1.0};
  EXPECT_THROW(run_sweep(spec), ParameterError);
}

TEST(Sweep, AlphaTracksRatio) {
  SweepSpec spec = small_case_ii_sweep();
  spec.alpha_tracks_ratio = true;
  spec.vary = VariedParam::M;
  const auto pt = sweep_point(spec, 1.5e6);
  EXPECT_EQ(pt.params.m, 1'500'000);
  EXPECT_DOUBLE_EQ(pt.regime.alpha, 1.5);
  spec.alpha_tracks_ratio = false;
  EXPECT_DOUBLE_EQ(sweep_point(spec, 1.5e6).regime.alpha, 1.0);
}

TEST(Sweep, CaseTwoRSweepStaysClose) {
  const auto result = run_sweep(preset("fig3c"));
  ASSERT_EQ(result.rows.size(), 30u);
  for (const auto& row : result.rows) EXPECT_LT(row.kl, 0.05) << "r = " << row.varied_value;
}

TEST(Sweep, CaseThreeSpikeAtEqualExponents) {
  const auto result = run_sweep(preset("fig4b"));
  std::vector<double> others;
  double at_equal = 0.0;
  for (const auto& row : result.rows) {
    if (row.varied_value == 15.0)
      at_equal = row.kl;
    else
      others.push_back(row.kl);
  }
  std::nth_element(others.begin(), others.begin() + others.size() / 2, others.end());
  EXPECT_GT(at_equal, 10.0 * others[others.size() / 2]);
}

TEST(Bound, CaseTwoPercentileShrinks) {
  double prev = INFINITY;
  for (std::int64_t n : {10'000, 100'000, 1'000'000}) {
    const auto d = run_bound_diagnostics({n, n, 0.5, 15.0, 15.0}, Regime::case_ii(1.0), 20'000, {1, 0});
    EXPECT_LT(d.q99, prev) << "n = " << n;
    EXPECT_LE(d.q50, d.q99);
    EXPECT_LE(d.q99, d.q100);
    EXPECT_GT(d.bound, 0.0);
    prev = d.q99;
  }
}

TEST(Bound, CollapsePercentileDoesNotShrink) {
  const auto a = run_bound_diagnostics({200'000, 2'000'000'000, 0.5, 15.0, 15.0}, Regime::collapse(), 20'000, {1, 0});
  const auto b = run_bound_diagnostics({400'000, 4'000'000'000, 0.5, 15.0, 15.0}, Regime::collapse(), 20'000, {1, 0});
  EXPECT_GE(b.q99, a.q99);
}

TEST(Bound, LinearPathHasNoRemainder) {
  const auto d = run_bound_diagnostics_unchecked(1000, 2000, 0.4, {0.0, 1.0}, 0.0, 5000, {3, 0});
  // f(x, y) = x: only rounding of the log-space path is left, against f(np, mp) = 400.
  EXPECT_LE(d.q50, 400.0 * 1e-15);
  EXPECT_LE(d.q99, 400.0 * 1e-15);
  EXPECT_LE(d.q100, 400.0 * 1e-15);
  EXPECT_TRUE(std::isnan(d.bound));
}

TEST(Presets, NamesAndShapes) {
  const auto names = preset_names();
  ASSERT_EQ(names.size(), 20u);
  EXPECT_EQ(names.front(), "fig1a");
  EXPECT_EQ(names.back(), "fig4e");
  for (const auto& name : names) {
    const auto spec = preset(name);
    EXPECT_EQ(spec.samples, 100'000u);
    EXPECT_EQ(spec.bins, 100u);
    EXPECT_NO_THROW(for (double v : spec.grid_values()) sweep_point(spec, v)) << name;
  }
  EXPECT_THROW(preset("fig5a"), ParameterError);
  EXPECT_THROW(preset("fig1f"), ParameterError);
}

TEST(Presets, FixedValues) {
  const auto d2 = preset("fig2d");
  EXPECT_EQ(d2.regime.kind, Regime::Kind::CaseI);
  EXPECT_EQ(d2.grid_values().front(), 1.1e9);
  EXPECT_EQ(d2.grid_values().back(), 1.101e9);
  const auto c4 = preset("fig4c");
  EXPECT_EQ(c4.base.s, 16.0);
  EXPECT_EQ(c4.base.r, 15.0);
  EXPECT_EQ(preset("fig1a").regime.kind, Regime::Kind::Collapse);
  const auto a1 = preset("fig1a").grid_values();
  EXPECT_EQ(a1.front(), 0.01);
  EXPECT_EQ(a1.back(), 0.99);
  EXPECT_TRUE(preset("fig3a").alpha_tracks_ratio);
}

TEST(Presets, DescendingCaptionRangeIsFlagged) {
  const auto spec = preset("fig4d");
  ASSERT_EQ(spec.warnings.size(), 1u);
  EXPECT_EQ(spec.grid_values().front(), 2.8e6);
  EXPECT_EQ(spec.grid_values().back(), 1.2e6);
  EXPECT_TRUE(preset("fig4e").warnings.empty());
}

TEST(Io, CsvHeaderAndDigits) {
  SweepResult result;
  SweepRow row;
  row.varied_param = VariedParam::P;
  row.varied_value = 0.1;
  row.kl = 1.0 / 3.0;
  row.direction = Direction::Reversed;
  row.smoothed_bins = 4;
  row.zero_denominator_count = 1;
  row.seed = 9;
  row.wall_time_ms = 2.5;
  result.rows.push_back(row);
  std::ostringstream out;
  write_sweep_csv(out, result);
  EXPECT_EQ(out.str(),
            "varied_param,varied_value,kl,direction,smoothed_bins,zero_denominator_count,seed,wall_time_ms\n"
            "p,0.10000000000000001,0.33333333333333331,reversed,4,1,9,2.5\n");
}

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5}) EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Io, ParseSweepSpec) {
  const auto j = Json::parse(R"({
    "base": {"n": 1000, "m": 2000, "p": 0.4, "r": 3, "s": 2},
    "regime": "case2", "alpha": "auto", "vary": "m",
    "grid": {"lo": 1000, "hi": 3000, "steps": 3},
    "replicates_per_point": 2, "samples": 500, "direction": "forward", "master_seed": 11
  })");
  const auto spec = parse_sweep_spec(j);
  EXPECT_EQ(spec.base.m, 2000);
  EXPECT_EQ(spec.regime.kind, Regime::Kind::CaseII);
  EXPECT_TRUE(spec.alpha_tracks_ratio);
  EXPECT_DOUBLE_EQ(spec.regime.alpha, 2.0);
  EXPECT_EQ(spec.vary, VariedParam::M);
  EXPECT_EQ(spec.grid_values(), (std::vector<double>{1000, 2000, 3000}));
  EXPECT_EQ(spec.replicates_per_point, 2u);
  EXPECT_EQ(spec.samples, 500u);
  EXPECT_EQ(spec.bins, 100u);
  EXPECT_EQ(spec.direction, Direction::Forward);
  EXPECT_EQ(spec.master_seed, 11u);
  EXPECT_EQ(run_sweep(spec, 2).rows.size(), 6u);
}

TEST(Io, MalformedSpecIsParameterError) {
  EXPECT_THROW(parse_sweep_spec(Json::parse(R"({"regime": "case1"})")), ParameterError);
  EXPECT_THROW(parse_sweep_spec(Json::parse(
                   R"({"base": {"n": 1, "m": 1, "p": 0.5, "r": 1, "s": 1}, "regime": "case9", "vary": "p", "grid": [0.5]})")),
               ParameterError);
  EXPECT_THROW(load_sweep_spec("/nonexistent/spec.json"), ParameterError);
}

TEST(Io, SingleRunJsonFields) {
  const auto run = run_single({2000, 3000, 0.5, 2.0, 1.0}, Regime::case_ii(1.5), 2000, 20, Direction::Auto, {1, 0});
  const Json j = to_json(run);
  EXPECT_TRUE(j.contains("limit_law"));
  EXPECT_EQ(j["divergence"]["direction"], "forward");
  EXPECT_EQ(j["simulated_histogram"]["edges"].size(), 21u);
  EXPECT_EQ(j["simulated_histogram"]["mass"].size(), 20u);
  EXPECT_TRUE(j["divergence"].contains("smoothed_bins"));
}
