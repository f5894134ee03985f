#ifndef BINRATIO_IO_HPP
#define BINRATIO_IO_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "binratio/divergence.hpp"
#include "binratio/model.hpp"
#include "binratio/oracle.hpp"
#include "binratio/runner.hpp"

namespace binratio {

using Json = nlohmann::json;

/// 17 significant digits; round-trips every double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline Json to_json(const ModelParams& p) {
  return {{"n", p.n}, {"m", p.m}, {"p", p.p}, {"r", p.r}, {"s", p.s}};
}

inline Json to_json(const Regime& r) {
  Json j = {{"kind", std::string(to_string(r.kind))}};
  if (r.kind == Regime::Kind::CaseII) j["alpha"] = r.alpha;
  return j;
}

inline Json to_json(const LimitLaw& law) {
  return {{"center", law.center},       {"log_center", law.log_center}, {"log_scale", law.log_scale},
          {"variance", law.variance},   {"params", to_json(law.params)}, {"regime", to_json(law.regime)}};
}

inline Json to_json(const Histogram& h) {
  return {{"edges", h.edges}, {"mass", h.mass}, {"total", h.total}, {"undercount", h.undercount},
          {"overcount", h.overcount}};
}

inline Json to_json(const DivergenceReport& d) {
  return {{"kl", d.kl},
          {"direction", std::string(to_string(d.direction))},
          {"smoothed_bins", d.smoothed_bins},
          {"bin_count", d.bin_count}};
}

inline Json to_json(const SingleRun& run) {
  return {{"limit_law", to_json(run.law)},
          {"divergence", to_json(run.comparison.report)},
          {"simulated_histogram", to_json(run.comparison.simulated)},
          {"reference_histogram", to_json(run.comparison.reference)},
          {"samples", run.samples},
          {"zero_numerator_count", run.zero_numerator_count},
          {"zero_denominator_count", run.zero_denominator_count},
          {"seed", {{"master_seed", run.seed.master_seed}, {"stream_index", run.seed.stream_index}}},
          {"wall_time_ms", run.wall_time_ms}};
}

inline Json to_json(const ExactDistribution& d) {
  Json j = {{"mean", d.mean},
            {"variance", d.variance},
            {"total_probability", d.total_probability},
            {"outcomes", d.outcomes},
            {"support_elided", d.support_elided}};
  if (!d.support_elided) {
    Json support = Json::array();
    for (const auto& pt : d.support) support.push_back({pt.value, pt.probability});
    j["support"] = std::move(support);
  }
  return j;
}

inline const char* kSweepCsvHeader =
    "varied_param,varied_value,kl,direction,smoothed_bins,zero_denominator_count,seed,wall_time_ms";

inline void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << kSweepCsvHeader << '\n';
  for (const auto& row : result.rows) {
    out << to_string(row.varied_param) << ',' << format_double(row.varied_value) << ',' << format_double(row.kl)
        << ',' << to_string(row.direction) << ',' << row.smoothed_bins << ',' << row.zero_denominator_count << ','
        << row.seed << ',' << format_double(row.wall_time_ms) << '\n';
  }
}

inline const char* kBoundCsvHeader = "n,m,p,r,s,regime,bound,q50,q99,q100,samples";

inline void write_bound_row(std::ostream& out, const BoundDiagnostics& d) {
  out << d.params.n << ',' << d.params.m << ',' << format_double(d.params.p) << ',' << format_double(d.params.r)
      << ',' << format_double(d.params.s) << ',' << to_string(d.regime.kind) << ',' << format_double(d.bound) << ','
      << format_double(d.q50) << ',' << format_double(d.q99) << ',' << format_double(d.q100) << ',' << d.samples
      << '\n';
}

/// Sweep spec file (JSON):
///
///   {
///     "name": "my-sweep",                       optional
///     "base": {"n": 1000000, "m": 1000000, "p": 0.5, "r": 15, "s": 15},
///     "regime": "case2",                        case1 | case2 | case3 | collapse
///     "alpha": 1.0,                             case2 only; number or "auto" (= m/n per point)
///     "vary": "r",                              p | s | r | m | n
///     "grid": [1, 2, 3]  or  {"lo": 1, "hi": 30, "steps": 30},
///     "replicates_per_point": 1,                optional, default 1
///     "samples": 100000,                        optional, default 100000
///     "bins": 100,                              optional, default 100
///     "direction": "auto",                      forward | reversed | auto
///     "master_seed": 20250101                   optional
///   }
inline SweepSpec parse_sweep_spec(const Json& j) {
  SweepSpec spec;
  try {
    spec.name = j.value("name", std::string("custom"));
    const Json& base = j.at("base");
    spec.base.n = base.at("n").get<std::int64_t>();
    spec.base.m = base.at("m").get<std::int64_t>();
    spec.base.p = base.at("p").get<double>();
    spec.base.r = base.at("r").get<double>();
    spec.base.s = base.at("s").get<double>();
    spec.regime.kind = parse_regime_kind(j.at("regime").get<std::string>());
    if (spec.regime.kind == Regime::Kind::CaseII) {
      const Json& alpha = j.contains("alpha") ? j.at("alpha") : Json("auto");
      if (alpha.is_string() && alpha.get<std::string>() == "auto") {
        spec.alpha_tracks_ratio = true;
        spec.regime.alpha = static_cast<double>(spec.base.m) / static_cast<double>(spec.base.n);
      } else {
        spec.regime.alpha = alpha.get<double>();
      }
    }
    spec.vary = parse_varied_param(j.at("vary").get<std::string>());
    const Json& grid = j.at("grid");
    if (grid.is_array())
      spec.grid = grid.get<std::vector<double>>();
    else
      spec.grid = GridRange{grid.at("lo").get<double>(), grid.at("hi").get<double>(),
                            grid.at("steps").get<std::size_t>()};
    spec.replicates_per_point = j.value("replicates_per_point", std::size_t{1});
    spec.samples = j.value("samples", std::size_t{100'000});
    spec.bins = j.value("bins", std::size_t{100});
    spec.direction = parse_direction(j.value("direction", std::string("auto")));
    spec.master_seed = j.value("master_seed", spec.master_seed);
  } catch (const Json::exception& e) {
    throw ParameterError(std::string("malformed sweep spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParameterError(std::string("malformed sweep spec: ") + e.what());
  }
  return spec;
}

inline SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open sweep spec '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ParameterError("sweep spec '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_sweep_spec(j);
}

}  // namespace binratio

#endif  // BINRATIO_IO_HPP
