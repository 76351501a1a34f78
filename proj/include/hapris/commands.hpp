#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hapris/config.hpp"
#include "hapris/table.hpp"
#include "hapris/validation.hpp"

namespace hapris::cli {

/// Progress lines go to the caller (stderr in the CLI); they never affect results.
using Progress = std::function<void(std::string_view)>;

struct CommandResult {
  Table table;
  /// Post-hoc assertions; any failure maps to the validation exit status.
  std::vector<validation::CheckResult> checks;

  bool passed() const;
};

/// Coverage against rho_th (dB), one series per L. Default grid -10..30 dB, step 1.
CommandResult coverage_sweep(const ScenarioConfig& cfg, const Progress& progress = {});

/// Ergodic capacity against rho0 (dB), one series per L. Default grid
/// 100..160 dB, step 5. Asserts monotonicity in rho0 and ordering in L.
CommandResult capacity_sweep(const ScenarioConfig& cfg, const Progress& progress = {});

/// Coverage at cfg.rho_th_db against mu_ris or h_ris.
CommandResult deployment_sweep(const ScenarioConfig& cfg, SweepParam parameter,
                               const Progress& progress = {});

/// Per-L simulation report: moments, coverage, capacity and distance
/// diagnostics next to their analytic values.
CommandResult montecarlo(const ScenarioConfig& cfg, const Progress& progress = {});

/// Oracle and invariant suite.
CommandResult validate(const ScenarioConfig& cfg, validation::Level level, const Progress& progress = {});

}  // namespace hapris::cli
