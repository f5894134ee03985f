// Command-line front end: limit, simulate, sweep, oracle, bound.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "binratio/binratio.hpp"
#include "binratio/io.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitBudget = 3;

struct ModelFlags {
  std::int64_t n = 1'000'000;
  std::int64_t m = 1'000'000;
  double p = 0.5;
  double r = 15.0;
  double s = 15.0;
  std::string regime = "case2";
  std::optional<double> alpha;

  void attach(CLI::App* cmd) {
    cmd->add_option("--n", n, "trials of X")->capture_default_str();
    cmd->add_option("--m", m, "trials of Y")->capture_default_str();
    cmd->add_option("--p", p, "success probability, strictly inside (0, 1)")->capture_default_str();
    cmd->add_option("--r", r, "denominator exponent")->capture_default_str();
    cmd->add_option("--s", s, "numerator exponent")->capture_default_str();
    cmd->add_option("--regime", regime, "case1 | case2 | case3 | collapse")->capture_default_str();
    cmd->add_option("--alpha", alpha, "case2 ratio m/n (default: m/n)");
  }

  [[nodiscard]] binratio::ModelParams params() const { return {n, m, p, s, r}; }

  [[nodiscard]] binratio::Regime make_regime() const {
    binratio::Regime reg;
    reg.kind = binratio::parse_regime_kind(regime);
    if (reg.kind == binratio::Regime::Kind::CaseII)
      reg.alpha = alpha.value_or(static_cast<double>(m) / static_cast<double>(n));
    return reg;
  }
};

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw binratio::ParameterError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

}  // namespace

int main(int argc, char** argv) {
  using namespace binratio;

  CLI::App app{"Monte Carlo laboratory for the Normal limit of X^s/(X+Y)^r with independent binomials"};
  app.require_subcommand(1);

  ModelFlags model;
  std::string out_path;
  std::size_t samples = 100'000;
  std::size_t bins = 100;
  std::string direction = "auto";
  std::uint64_t seed = 20250101;
  std::size_t threads = 0;

  auto* limit_cmd = app.add_subcommand("limit", "print the limit law (center, scale, variance) as JSON");
  model.attach(limit_cmd);
  limit_cmd->add_option("--out", out_path, "output file");

  auto* sim_cmd = app.add_subcommand("simulate", "one simulated-vs-Normal KL comparison (JSON)");
  model.attach(sim_cmd);
  sim_cmd->add_option("--samples", samples, "draws per sample")->capture_default_str();
  sim_cmd->add_option("--bins", bins, "histogram bins")->capture_default_str();
  sim_cmd->add_option("--direction", direction, "forward | reversed | auto")->capture_default_str();
  sim_cmd->add_option("--seed", seed, "master seed")->capture_default_str();
  sim_cmd->add_option("--out", out_path, "output file");

  std::string preset_name;
  std::string spec_path;
  std::optional<std::uint64_t> sweep_seed;
  std::optional<std::size_t> sweep_samples;
  auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep (CSV)");
  auto* preset_opt = sweep_cmd->add_option("--preset", preset_name, "built-in sweep fig1a .. fig4e");
  auto* spec_opt = sweep_cmd->add_option("--spec", spec_path, "JSON sweep spec file");
  preset_opt->excludes(spec_opt);
  sweep_cmd->add_option("--seed", sweep_seed, "override the master seed");
  sweep_cmd->add_option("--samples", sweep_samples, "override draws per point");
  sweep_cmd->add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();
  sweep_cmd->add_option("--out", out_path, "output file");
  sweep_cmd->add_flag_callback("--list", [] {
    for (const auto& name : preset_names()) std::cout << name << '\n';
    std::exit(0);
  }, "list presets and exit");

  bool no_support = false;
  auto* oracle_cmd = app.add_subcommand("oracle", "exact distribution by full enumeration (JSON)");
  model.attach(oracle_cmd);
  oracle_cmd->add_flag("--no-support", no_support, "omit the support list");
  oracle_cmd->add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();
  oracle_cmd->add_option("--out", out_path, "output file");
  bool standardize_flag = false;
  oracle_cmd->add_flag("--standardize", standardize_flag, "enumerate T for --regime instead of R");

  std::vector<double> scales{1.0};
  std::size_t bound_samples = 10'000;
  auto* bound_cmd = app.add_subcommand("bound", "remainder bound vs empirical |scale * Q| quantiles (CSV)");
  model.attach(bound_cmd);
  bound_cmd->add_option("--samples", bound_samples, "draws per row")->capture_default_str();
  bound_cmd->add_option("--seed", seed, "master seed")->capture_default_str();
  bound_cmd->add_option("--scale", scales, "multiply (n, m) by each factor, one row each")->capture_default_str();
  bound_cmd->add_option("--out", out_path, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    Output out(out_path);
    if (limit_cmd->parsed()) {
      out.stream() << to_json(limit_law(model.params(), model.make_regime())).dump(2) << '\n';
    } else if (sim_cmd->parsed()) {
      const SingleRun run =
          run_single(model.params(), model.make_regime(), samples, bins, parse_direction(direction), {seed, 0});
      if (run.zero_denominator_count > 0)
        std::cerr << "warning: " << run.zero_denominator_count << " draws had X + Y = 0\n";
      out.stream() << to_json(run).dump(2) << '\n';
    } else if (sweep_cmd->parsed()) {
      if (preset_name.empty() && spec_path.empty())
        throw ParameterError("sweep needs --preset or --spec");
      SweepSpec spec = preset_name.empty() ? load_sweep_spec(spec_path) : preset(preset_name);
      if (sweep_seed) spec.master_seed = *sweep_seed;
      if (sweep_samples) spec.samples = *sweep_samples;
      for (const auto& w : spec.warnings) std::cerr << "warning: " << w << '\n';
      const SweepResult result = run_sweep(spec, threads);
      for (const auto& row : result.rows)
        if (row.zero_denominator_count > 0)
          std::cerr << "warning: " << to_string(row.varied_param) << " = " << row.varied_value << ": "
                    << row.zero_denominator_count << " draws had X + Y = 0\n";
      write_sweep_csv(out.stream(), result);
    } else if (oracle_cmd->parsed()) {
      OracleOptions opt;
      opt.threads = threads;
      if (no_support) opt.support_limit = 0;
      const bool standardize = standardize_flag || oracle_cmd->count("--regime") > 0;
      const std::optional<Regime> regime =
          standardize ? std::optional<Regime>(model.make_regime()) : std::nullopt;
      out.stream() << to_json(exact_distribution(model.params(), regime, opt)).dump(2) << '\n';
    } else if (bound_cmd->parsed()) {
      out.stream() << kBoundCsvHeader << '\n';
      for (double k : scales) {
        ModelFlags scaled = model;
        scaled.n = std::llround(static_cast<double>(model.n) * k);
        scaled.m = std::llround(static_cast<double>(model.m) * k);
        write_bound_row(out.stream(),
                        run_bound_diagnostics(scaled.params(), scaled.make_regime(), bound_samples, {seed, 0}));
      }
    }
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
