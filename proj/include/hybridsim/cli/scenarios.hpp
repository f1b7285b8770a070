#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hybridsim/cli/config.hpp"

namespace hybridsim::cli {

// Columns carry their unit in the name (t_s, g_hz, ...); values are written
// with 17 significant digits.
struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct TargetCheck {
  std::string name;
  double value = 0.0;
  std::optional<double> min, max;
  bool passed = false;
};

struct RunOutput {
  std::string scenario;
  json resolved = json::object();   // parameters after derivation, with override flags
  json headlines = json::object();  // named scalars
  json details = json::object();    // scenario-specific extras (invariants, reports)
  std::vector<CsvTable> tables;
  std::vector<TargetCheck> targets;
  bool passed = true;  // every declared target met (and, for validate, every criterion)
};

// Runs the configured scenario. Throws ConfigError for inconsistent input
// and NumericalError when the numerics fail. Nothing is written to disk.
RunOutput run_scenario(const Config& config);

// One row per grid value of `variable` (a numeric config key). base "params"
// tabulates the coupling set, "cool_steady" the steady cooling occupancy.
RunOutput run_sweep(const Config& config, const std::string& variable, const std::vector<double>& grid);

// "a:b:n" linear, "log:a:b:n" geometric, or "v1,v2,...". Throws ConfigError.
std::vector<double> parse_grid(const std::string& spec);

std::string format_number(double v);  // 17 significant digits
void write_csv(const std::filesystem::path& path, const CsvTable& table);
json run_summary(const RunOutput& out, const Config& config, double wall_clock_s);
// Creates `dir`, writes every table as <name>.csv and summary.json.
void write_artifacts(const std::filesystem::path& dir, const RunOutput& out, const Config& config,
                     double wall_clock_s);

}  // namespace hybridsim::cli
