#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hapris/analytic.hpp"
#include "hapris/simulate.hpp"

namespace hapris::cli {

enum class SweepParam { rho_th_db, rho0_db, mu_ris, h_ris };
enum class OutputFormat { csv, json };
enum class Mode { analytic, mc, both };

std::string_view to_string(SweepParam p);
std::string_view to_string(OutputFormat f);
std::string_view to_string(Mode m);
std::string_view to_string(geometry::Visibility v);

std::optional<SweepParam> parse_sweep_param(std::string_view s);
std::optional<OutputFormat> parse_format(std::string_view s);
std::optional<Mode> parse_mode(std::string_view s);
std::optional<geometry::Visibility> parse_visibility(std::string_view s);

struct SweepSpec {
  SweepParam parameter = SweepParam::rho_th_db;
  /// Strictly ascending, nonempty. dB for rho_th_db and rho0_db.
  std::vector<double> grid;
};

/// One scenario file. num_elements lists the L values run as separate series.
struct ScenarioConfig {
  analytic::SystemParams system;
  std::vector<int> num_elements{0, 50, 100};
  std::optional<SweepSpec> sweep;
  /// Threshold used where the sweep is not over rho_th (deployment sweeps, montecarlo).
  double rho_th_db = 10.0;
  sim::McConfig mc;
  Mode mode = Mode::both;
  OutputFormat format = OutputFormat::csv;
  std::optional<std::string> out_path;
};

/// Dense-urban reference values with L in {0, 50, 100}.
ScenarioConfig default_config();

/// Parses a JSON scenario. Missing fields keep their defaults; unknown
/// fields are rejected. Throws ConfigError with line/column or field path.
ScenarioConfig parse_config(std::string_view text, std::string_view source = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical JSON rendering of every field that affects results.
std::string canonical_json(const ScenarioConfig& cfg);

/// 64-bit FNV-1a of canonical_json, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

/// Evenly spaced grid from start to stop inclusive.
std::vector<double> linear_grid(double start, double stop, double step);

}  // namespace hapris::cli
