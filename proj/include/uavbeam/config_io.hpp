#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavbeam/simulation.hpp"

namespace uavbeam {

// Configuration / usage errors map to CLI exit code 2; anything else that
// escapes maps to 3.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Load a scenario from a JSON file (or a preset name via preset()), then
// apply "dotted.path=value" overrides. Values parse as JSON scalars/arrays
// with a string fallback. Validation failures name the field and the violated
// constraint.
ScenarioConfig parse_config_file(const std::string& path,
                                 const std::vector<std::string>& overrides = {});
ScenarioConfig parse_config_text(const std::string& json_text,
                                 const std::vector<std::string>& overrides = {});

// Canonical JSON form of a resolved config; parse_config_text of this text
// reproduces a config with the same hash.
std::string export_config(const ScenarioConfig& cfg);

// FNV-1a over the canonical form, as a 16-hex-digit string.
std::string config_hash(const ScenarioConfig& cfg);

enum class ExportFormat { Csv, JsonLines };

// Sweep export. CSV columns, in order:
//   theta_deg, sectors, mean_sum_rate_bps, mean_avg_rate_bps, mean_jain, infeasible_fraction
// one row per theta sorted ascending; measured columns in full double
// precision scientific notation. Byte-identical for identical results.
std::string export_sweep(const SweepResult& result, ExportFormat format);

struct RunManifest {
  std::string config_hash;
  std::uint64_t master_seed = 0;
  std::string tool_version;
  std::string created_utc;
  std::vector<std::string> outputs;
};

std::string export_manifest(const RunManifest& manifest, const ScenarioConfig& cfg);

std::string export_trial_detail(const TrialDetail& detail);

}  // namespace uavbeam
