// Command-line front end: sweeps, simulation reports and the validation suite.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hapris/commands.hpp"
#include "hapris/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kValidationFailed = 1, kConfigError = 2, kNumericalError = 3 };

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<unsigned> threads;
  std::string out;
  std::string format;
  std::string mode;
  std::string visibility;
  std::string parameter;
  std::string level = "quick";
  bool quiet = false;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "Scenario JSON file (defaults when omitted)");
  sub->add_option("--seed", o.seed, "Monte Carlo seed");
  sub->add_option("--trials", o.trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
  sub->add_option("--threads", o.threads, "Worker threads, 0 = hardware concurrency");
  sub->add_option("--out", o.out, "Output file (stdout when omitted)");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--mode", o.mode, "analytic, mc or both")->check(CLI::IsMember({"analytic", "mc", "both"}));
  sub->add_option("--visibility", o.visibility, "independent or explicit")
      ->check(CLI::IsMember({"independent", "explicit"}));
  sub->add_flag("--quiet,-q", o.quiet, "No progress lines on stderr");
}

hapris::cli::ScenarioConfig build_config(const Options& o) {
  using namespace hapris::cli;
  ScenarioConfig cfg = o.config_path.empty() ? default_config() : load_config(o.config_path);
  if (o.seed) cfg.mc.seed = *o.seed;
  if (o.trials) cfg.mc.num_trials = *o.trials;
  if (o.threads) cfg.mc.threads = *o.threads;
  if (!o.out.empty()) cfg.out_path = o.out;
  if (!o.format.empty()) cfg.format = *parse_format(o.format);
  if (!o.mode.empty()) cfg.mode = *parse_mode(o.mode);
  if (!o.visibility.empty()) cfg.mc.visibility = *parse_visibility(o.visibility);
  return cfg;
}

int emit(const hapris::cli::ScenarioConfig& cfg, const hapris::cli::CommandResult& result) {
  using namespace hapris::cli;
  const Provenance prov{config_hash(cfg), cfg.mc.seed};
  if (cfg.out_path) {
    std::ofstream os(*cfg.out_path, std::ios::binary | std::ios::trunc);
    if (!os) throw hapris::ConfigError("cannot open output file " + *cfg.out_path);
    write_table(os, result.table, prov, cfg.format);
  } else {
    write_table(std::cout, result.table, prov, cfg.format);
  }
  for (const auto& c : result.checks) {
    if (!c.passed || result.table.schema == "hapris.validate/1") {
      std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    }
  }
  return result.passed() ? kOk : kValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coverage and ergodic capacity of RIS-assisted HAP networks"};
  app.require_subcommand(1);
  Options o;

  auto* cov = app.add_subcommand("coverage-sweep", "Coverage probability against the SNR threshold");
  auto* cap = app.add_subcommand("capacity-sweep", "Ergodic capacity against the transmit SNR");
  auto* dep = app.add_subcommand("deployment-sweep", "Coverage against RIS intensity or height");
  auto* mc = app.add_subcommand("montecarlo", "Simulation report next to the analytic values");
  auto* val = app.add_subcommand("validate", "Run the oracle and invariant suite");
  for (auto* sub : {cov, cap, dep, mc, val}) add_common(sub, o);
  dep->add_option("--parameter", o.parameter, "mu_ris or h_ris (default: the config sweep, else mu_ris)")->check(CLI::IsMember({"mu_ris", "h_ris"}));
  val->add_option("level", o.level, "quick or full")->check(CLI::IsMember({"quick", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  using namespace hapris::cli;
  try {
    const ScenarioConfig cfg = build_config(o);
    Progress progress;
    if (!o.quiet) progress = [](std::string_view msg) { std::cerr << msg << '\n'; };
    if (cov->parsed()) return emit(cfg, coverage_sweep(cfg, progress));
    if (cap->parsed()) return emit(cfg, capacity_sweep(cfg, progress));
    if (dep->parsed()) {
      SweepParam param = SweepParam::mu_ris;
      if (!o.parameter.empty()) {
        param = *parse_sweep_param(o.parameter);
      } else if (cfg.sweep) {
        param = cfg.sweep->parameter;
      }
      return emit(cfg, deployment_sweep(cfg, param, progress));
    }
    if (mc->parsed()) return emit(cfg, montecarlo(cfg, progress));
    const auto level = o.level == "full" ? hapris::validation::Level::full : hapris::validation::Level::quick;
    return emit(cfg, validate(cfg, level, progress));
  } catch (const hapris::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const hapris::DomainError& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kConfigError;
  } catch (const hapris::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationFailed;
  }
}
