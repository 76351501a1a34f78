#include "hapris/commands.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hapris/errors.hpp"

namespace hapris::cli {

namespace {

constexpr std::uint64_t kMaxKeptDistances = 2000000;

std::vector<double> sweep_grid(const ScenarioConfig& cfg, SweepParam expected, std::vector<double> fallback) {
  if (!cfg.sweep) return fallback;
  if (cfg.sweep->parameter != expected) {
    throw ConfigError("field /sweep/parameter: this command sweeps " + std::string(to_string(expected)) +
                      ", config has " + std::string(to_string(cfg.sweep->parameter)));
  }
  return cfg.sweep->grid;
}

analytic::SystemParams series(const ScenarioConfig& cfg, int l) {
  analytic::SystemParams sp = cfg.system;
  sp.cascade.num_elements = l;
  return sp;
}

bool wants_analytic(const ScenarioConfig& cfg) { return cfg.mode != Mode::mc; }
bool wants_mc(const ScenarioConfig& cfg) { return cfg.mode != Mode::analytic; }

void report(const Progress& progress, const std::string& msg) {
  if (progress) progress(msg);
}

std::vector<int> sorted_elements(const ScenarioConfig& cfg) {
  std::vector<int> ls = cfg.num_elements;
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  return ls;
}

Cell opt(const std::optional<double>& v) { return v ? Cell(*v) : Cell(); }

}  // namespace

bool CommandResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

CommandResult coverage_sweep(const ScenarioConfig& cfg, const Progress& progress) {
  const auto grid = sweep_grid(cfg, SweepParam::rho_th_db, linear_grid(-10.0, 30.0, 1.0));
  CommandResult out;
  out.table.schema = "hapris.coverage/1";
  out.table.columns = {"L", "rho_th_db", "p_cov_analytic", "p_cov_mc", "mc_ci"};

  std::vector<double> thresholds;
  for (double db : grid) thresholds.push_back(analytic::db_to_linear(db));
  for (int l : sorted_elements(cfg)) {
    const auto sp = series(cfg, l);
    std::optional<analytic::ChannelStats> cs;
    if (wants_analytic(cfg)) cs = analytic::channel_stats(sp);
    std::vector<sim::CoveragePoint> mc;
    if (wants_mc(cfg)) {
      report(progress, "coverage-sweep: simulating L=" + std::to_string(l));
      mc = sim::estimate_coverage(sp, cfg.mc, thresholds);
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::vector<Cell> row{std::int64_t{l}, grid[i]};
      row.push_back(cs ? Cell(analytic::coverage_probability(thresholds[i], *cs, sp.rho0())) : Cell());
      row.push_back(mc.empty() ? Cell() : Cell(mc[i].p_cov));
      row.push_back(mc.empty() ? Cell() : Cell(mc[i].ci_halfwidth));
      out.table.add_row(std::move(row));
    }
  }
  return out;
}

CommandResult capacity_sweep(const ScenarioConfig& cfg, const Progress& progress) {
  const auto grid = sweep_grid(cfg, SweepParam::rho0_db, linear_grid(100.0, 160.0, 5.0));
  CommandResult out;
  out.table.schema = "hapris.capacity/1";
  out.table.columns = {"L", "rho0_db", "cap_analytic", "cap_method", "cap_mc", "mc_ci"};

  std::vector<double> rho0;
  for (double db : grid) rho0.push_back(analytic::db_to_linear(db));
  const auto ls = sorted_elements(cfg);
  std::vector<std::vector<double>> an(ls.size()), mc(ls.size());

  for (std::size_t s = 0; s < ls.size(); ++s) {
    const auto sp = series(cfg, ls[s]);
    std::vector<analytic::CapacityValue> cap;
    if (wants_analytic(cfg)) {
      const auto cs = analytic::channel_stats(sp);
      for (double r : rho0) cap.push_back(analytic::ergodic_capacity_guarded(cs, r));
    }
    std::vector<sim::CapacityPoint> cap_mc;
    if (wants_mc(cfg)) {
      report(progress, "capacity-sweep: simulating L=" + std::to_string(ls[s]));
      sim::SimulationRequest req;
      req.capacity_rho0 = rho0;
      cap_mc = sim::simulate(sp, cfg.mc, req).capacity;
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::vector<Cell> row{std::int64_t{ls[s]}, grid[i]};
      if (!cap.empty()) {
        row.push_back(cap[i].bits);
        row.push_back(std::string(cap[i].method == analytic::CapacityMethod::closed_form ? "closed_form"
                                                                                       : "quadrature"));
        an[s].push_back(cap[i].bits);
      } else {
        row.insert(row.end(), {Cell(), Cell()});
      }
      if (!cap_mc.empty()) {
        row.push_back(cap_mc[i].bits.value);
        row.push_back(cap_mc[i].bits.ci_halfwidth);
        mc[s].push_back(cap_mc[i].bits.value);
      } else {
        row.insert(row.end(), {Cell(), Cell()});
      }
      out.table.add_row(std::move(row));
    }
  }

  auto check = [&](const std::vector<std::vector<double>>& curves, const std::string& tag) {
    if (curves.front().empty()) return;
    std::string bad;
    for (std::size_t s = 0; s < curves.size(); ++s) {
      for (std::size_t i = 1; i < curves[s].size(); ++i) {
        if (curves[s][i] < curves[s][i - 1]) {
          bad += "L=" + std::to_string(ls[s]) + " at " + format_double(grid[i]) + " dB; ";
        }
      }
    }
    out.checks.push_back({"capacity_monotone_in_rho0_" + tag, bad.empty(), bad});
    bad.clear();
    for (std::size_t s = 1; s < curves.size(); ++s) {
      for (std::size_t i = 0; i < curves[s].size(); ++i) {
        if (curves[s][i] < curves[s - 1][i]) {
          bad += "L=" + std::to_string(ls[s]) + " below L=" + std::to_string(ls[s - 1]) + " at " +
                 format_double(grid[i]) + " dB; ";
        }
      }
    }
    out.checks.push_back({"capacity_ordered_in_L_" + tag, bad.empty(), bad});
  };
  check(an, "analytic");
  check(mc, "mc");
  return out;
}

CommandResult deployment_sweep(const ScenarioConfig& cfg, SweepParam parameter, const Progress& progress) {
  if (parameter != SweepParam::mu_ris && parameter != SweepParam::h_ris) {
    throw ConfigError("deployment-sweep sweeps mu_ris or h_ris");
  }
  const auto grid = sweep_grid(cfg, parameter,
                               parameter == SweepParam::mu_ris ? validation::default_mu_ris_grid()
                                                               : validation::default_h_ris_grid());
  CommandResult out;
  out.table.schema = "hapris.deployment/1";
  out.table.columns = {"L", std::string(to_string(parameter)), "rho_th_db", "p_cov_analytic", "p_cov_mc", "mc_ci"};
  const std::vector<double> th{analytic::db_to_linear(cfg.rho_th_db)};

  for (int l : sorted_elements(cfg)) {
    for (double x : grid) {
      auto sp = series(cfg, l);
      if (parameter == SweepParam::mu_ris) {
        sp.deployment.mu_ris = x;
      } else {
        sp.deployment.h_ris = x;
      }
      try {
        sp.validate();
      } catch (const DomainError& e) {
        throw ConfigError(std::string("sweep point ") + format_double(x) + ": " + e.what());
      }
      std::vector<Cell> row{std::int64_t{l}, x, cfg.rho_th_db};
      row.push_back(wants_analytic(cfg)
                        ? Cell(analytic::coverage_probability(th[0], analytic::channel_stats(sp), sp.rho0()))
                        : Cell());
      if (wants_mc(cfg)) {
        report(progress, "deployment-sweep: simulating L=" + std::to_string(l) + " " +
                             std::string(to_string(parameter)) + "=" + format_double(x));
        const auto p = sim::estimate_coverage(sp, cfg.mc, th).front();
        row.push_back(p.p_cov);
        row.push_back(p.ci_halfwidth);
      } else {
        row.insert(row.end(), {Cell(), Cell()});
      }
      out.table.add_row(std::move(row));
    }
  }
  return out;
}

CommandResult montecarlo(const ScenarioConfig& cfg, const Progress& progress) {
  CommandResult out;
  out.table.schema = "hapris.montecarlo/1";
  out.table.columns = {"L", "trials", "visibility", "rho_th_db",
                       "mean_A_analytic", "mean_A_mc", "mean_A_se",
                       "var_A_analytic", "var_A_mc", "var_A_se",
                       "p_cov_analytic", "p_cov_mc", "p_cov_ci",
                       "cap_analytic", "cap_mc", "cap_ci",
                       "void_probability", "void_frequency", "ks_w_g", "ks_w_hap",
                       "hap_ris_gain_analytic", "hap_ris_gain_mc", "hap_ris_gain_se"};
  const double th = analytic::db_to_linear(cfg.rho_th_db);
  for (int l : sorted_elements(cfg)) {
    const auto sp = series(cfg, l);
    const auto& dep = sp.deployment;
    const auto cs = analytic::channel_stats(sp);
    report(progress, "montecarlo: simulating L=" + std::to_string(l));
    sim::SimulationRequest req;
    req.thresholds = {th};
    req.keep_distances = cfg.mc.num_trials <= kMaxKeptDistances;
    const auto s = sim::simulate(sp, cfg.mc, req);

    std::optional<double> ks_g, ks_h;
    if (req.keep_distances) {
      const auto& b = sp.blockage();
      const double mass = 1.0 - geometry::void_probability(dep.mu_ris, b);
      ks_g = ks_statistic(s.w_g, [&](double w) { return geometry::cdf_nearest_visible_ris(w, dep.mu_ris, b) / mass; });
      ks_h = ks_statistic(s.w_hap, [&](double w) { return geometry::cdf_nearest_hap(w, dep.lambda_hap); });
    }
    const double gain = geometry::moment_r(1.0, sp.pathloss.hap_ris, dep.h_hap - dep.h_ris, dep.lambda_hap);
    out.table.add_row({std::int64_t{l}, static_cast<std::int64_t>(s.trials),
                       std::string(to_string(cfg.mc.visibility)), cfg.rho_th_db,
                       cs.mean_A, s.mean_A.value, s.mean_A.std_error,
                       cs.var_A, s.var_A.value, s.var_A.std_error,
                       analytic::coverage_probability(th, cs, sp.rho0()), s.coverage[0].p_cov, s.coverage[0].ci_halfwidth,
                       analytic::ergodic_capacity_guarded(cs, sp.rho0()).bits, s.capacity[0].bits.value,
                       s.capacity[0].bits.ci_halfwidth,
                       geometry::void_probability(dep.mu_ris, sp.blockage()),
                       static_cast<double>(s.void_trials) / static_cast<double>(s.trials), opt(ks_g), opt(ks_h),
                       gain, s.hap_ris_gain.value, s.hap_ris_gain.std_error});
  }
  return out;
}

CommandResult validate(const ScenarioConfig& cfg, validation::Level level, const Progress& progress) {
  report(progress, std::string("validate: running the ") + (level == validation::Level::quick ? "quick" : "full") +
                       " suite");
  CommandResult out;
  out.table.schema = "hapris.validate/1";
  out.table.columns = {"check", "passed", "detail"};
  out.checks = validation::run_suite(level, cfg.system, cfg.mc.seed);
  for (const auto& c : out.checks) {
    out.table.add_row({c.name, std::int64_t{c.passed ? 1 : 0}, c.detail});
  }
  return out;
}

}  // namespace hapris::cli
