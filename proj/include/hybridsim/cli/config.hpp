#pragma once

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hybridsim/device/couplings.hpp"

// Flat, unit-suffixed scenario configuration. Every key has a registered
// type and default; angular frequencies and rates may also be given with a
// `_hz` suffix (value / 2pi), which is stored under the canonical
// `_rad_s` / `_per_s` key.
namespace hybridsim::cli {

using json = nlohmann::json;

enum class KeyType { number, integer, boolean, string };

struct KeyInfo {
  std::string name;
  KeyType type = KeyType::number;
  json default_value;  // null: unset unless given
  std::string help;
};

const std::vector<KeyInfo>& registered_keys();

class Config {
 public:
  Config();  // every key at its default, scenario unset

  // Parses a JSON object; nested objects are flattened with '.'. Throws
  // ConfigError on syntax errors, unknown keys and type mismatches.
  static Config from_json(const json& j);
  static Config from_file(const std::filesystem::path& path);

  void set(std::string key, json value);
  // "key=value"; the value is read as JSON when it parses, else as a string.
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const;  // non-null value
  bool explicitly_set(const std::string& key) const { return explicit_.count(key) != 0; }
  double number(const std::string& key) const;
  std::optional<double> optional_number(const std::string& key) const;
  std::size_t integer(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::string string(const std::string& key) const;

  // Every key with its resolved value, in key order.
  json echo() const;
  // target.<headline>.min / .max pairs.
  std::map<std::string, std::pair<std::optional<double>, std::optional<double>>> targets() const;

 private:
  const json& raw(const std::string& key) const;
  std::map<std::string, json> values_;
  std::set<std::string> explicit_;
};

// Device description from the device/beam/cavity/electrode/drive/magnet keys.
device::DeviceSpec device_spec(const Config& c);

struct ResolvedValue {
  double value = 0.0;
  double derived = 0.0;
  bool overridden = false;
};

// Coupling set derived from the device with coupling.* overrides applied.
struct ResolvedCouplings {
  device::CouplingReport report;  // as derived
  device::CouplingSet set;        // after overrides
  std::map<std::string, ResolvedValue> values;  // keyed by the coupling.* suffix
};

ResolvedCouplings resolve_couplings(const Config& c);

}  // namespace hybridsim::cli
