#include "hybridsim/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hybridsim/errors.hpp"

namespace hybridsim::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<KeyInfo> build_keys() {
  using T = KeyType;
  const json null;
  return {
      {"scenario", T::string, null, "params | sweep | cool | rabi | transfer | effective | validate"},
      {"output.directory", T::string, null, "artifact directory (the --out flag wins)"},

      {"device.variant", T::string, "gap", "photon-phonon coupling geometry: gap | electrode"},
      {"device.temperature_k", T::number, 0.02, "bath temperature"},
      {"device.gamma_s_per_s", T::number, kTwoPi * 2e3, "spin dephasing rate on D[sigma_z]"},

      {"beam.length_m", T::number, 80e-6, ""},
      {"beam.radius_m", T::number, 100e-9, ""},
      {"beam.youngs_modulus_pa", T::number, 1.05e12, ""},
      {"beam.density_kg_m3", T::number, 3515.0, ""},
      {"beam.relative_permittivity", T::number, 5.7, ""},
      {"beam.quality_factor", T::number, 1e5, ""},
      {"beam.textbook_inertia", T::boolean, false, "pi r^4/4 instead of pi r^4/8"},

      {"cavity.stripline_length_m", T::number, 0.01, ""},
      {"cavity.electrode_distance_m", T::number, 5e-6, ""},
      {"cavity.lateral_period_m", T::number, 0.0, "0: ten electrode distances"},
      {"cavity.effective_permittivity", T::number, 6.0, ""},
      {"cavity.quality_factor", T::number, 1e6, ""},
      {"cavity.beam_x_m", T::number, 1e-6, ""},
      {"cavity.beam_y_m", T::number, 0.0, ""},
      {"cavity.beam_z_m", T::number, 0.0, ""},
      {"cavity.mode_amplitude", T::number, std::exp(-0.2), "anchored |e_tr| at the beam (dimensionless)"},
      {"cavity.mode_gradient_per_m", T::number, 1.0 / 2e-6, "anchored d e_tr/dx at the beam"},
      {"cavity.series_terms", T::integer, 50, ""},

      {"electrode.u0_v", T::number, null, ""},
      {"electrode.capacitance_f", T::number, null, ""},
      {"electrode.zeta", T::number, 0.4, ""},
      {"electrode.height_m", T::number, 100e-9, ""},

      {"drive.amplitude_v_per_m", T::number, 10e6, ""},
      {"drive.frequency_rad_s", T::number, null, "default: red sideband omega_c + omega_m"},

      {"magnet.length_m", T::number, 200e-9, ""},
      {"magnet.width_m", T::number, 50e-9, ""},
      {"magnet.thickness_m", T::number, 50e-9, ""},
      {"magnet.magnetization_a_per_m", T::number, 1.5e6, ""},
      {"magnet.standoff_m", T::number, 60e-9, ""},
      {"magnet.bias_field_t", T::number, 0.0, ""},
      {"magnet.gradient_t_per_m", T::number, 1e7, "replaces the dipole estimate when set"},

      {"coupling.omega_m_rad_s", T::number, null, "override"},
      {"coupling.g_rad_s", T::number, null, "override"},
      {"coupling.lambda_rad_s", T::number, null, "override"},
      {"coupling.kappa_per_s", T::number, null, "override"},
      {"coupling.gamma_m_per_s", T::number, null, "override"},
      {"coupling.gamma_s_per_s", T::number, null, "override"},
      {"coupling.n_th", T::number, null, "override"},
      {"coupling.delta_rad_s", T::number, null, "override"},
      {"coupling.omega_plus_rad_s", T::number, null, "override"},

      {"numerics.mech_cutoff", T::integer, 6, ""},
      {"numerics.cav_cutoff", T::integer, 4, ""},
      {"numerics.rtol", T::number, 1e-8, ""},
      {"numerics.atol", T::number, 1e-10, ""},
      {"numerics.check_positivity", T::boolean, true, ""},
      {"numerics.samples", T::integer, 401, "output grid points"},

      {"cool.n_b0", T::number, null, "initial beam occupation (default n_th)"},
      {"cool.t_max_s", T::number, 300e-6, ""},
      {"cool.g_over_kappa", T::number, null, "sets g = ratio * kappa"},

      {"rabi.t_max_s", T::number, 100e-6, ""},
      {"rabi.dissipation", T::boolean, true, ""},
      {"rabi.n_m0", T::number, 0.3, ""},
      {"rabi.resonant", T::boolean, true, "force omega_+ = Delta = omega_m"},

      {"transfer.shape", T::string, "gaussian", "gaussian | constant"},
      {"transfer.g0_rad_s", T::number, null, "peak photon-phonon coupling (default 1.8 lambda)"},
      {"transfer.width_s2", T::number, 4.0, "g = g0 exp(-t^2 / width)"},
      {"transfer.t_start_s", T::number, 0.0, ""},
      {"transfer.t_end_s", T::number, null, "default: where g falls to 1e-6 g0"},
      {"transfer.n_m0", T::number, 0.1, ""},
      {"transfer.spin_angle_rad", T::number, std::numbers::pi / 2,
       "initial spin cos(a/2)|0> + sin(a/2)|-1>"},
      {"transfer.cutoff_check", T::boolean, false, "rerun with twice the mechanics cutoff"},

      {"effective.delta1_rad_s", T::number, null, "omega_m - omega_+"},
      {"effective.delta2_rad_s", T::number, 0.0, "Delta - omega_+"},
      {"effective.periods", T::number, 1.0, "horizon in effective Rabi periods pi/g_eff"},

      {"sweep.variable", T::string, null, "config key to vary"},
      {"sweep.grid", T::string, null, "a:b:n (linear), log:a:b:n, or v1,v2,..."},
      {"sweep.base", T::string, "params", "params | cool_steady"},

      {"validate.filter", T::string, null, "comma-separated criterion ids"},
  };
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, json>>& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten(*it, key, out);
    } else {
      out.emplace_back(key, *it);
    }
  }
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_target_key(const std::string& key) {
  return key.rfind("target.", 0) == 0 && (ends_with(key, ".min") || ends_with(key, ".max")) &&
         key.size() > std::string("target..min").size();
}

}  // namespace

const std::vector<KeyInfo>& registered_keys() {
  static const std::vector<KeyInfo> keys = build_keys();
  return keys;
}

Config::Config() {
  for (const auto& k : registered_keys()) values_[k.name] = k.default_value;
}

Config Config::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  std::vector<std::pair<std::string, json>> flat;
  flatten(j, "", flat);
  Config c;
  for (auto& [k, v] : flat) c.set(k, v);
  return c;
}

Config Config::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

void Config::set(std::string key, json value) {
  if (is_target_key(key)) {
    if (!value.is_number()) throw ConfigError("config: " + key + " must be a number");
    values_[key] = value;
    explicit_.insert(key);
    return;
  }
  if (ends_with(key, "_hz") && !values_.count(key)) {
    const std::string base = key.substr(0, key.size() - 3);
    for (const char* unit : {"_rad_s", "_per_s"}) {
      if (values_.count(base + unit)) {
        if (!value.is_number()) throw ConfigError("config: " + key + " must be a number");
        key = base + unit;
        value = kTwoPi * value.get<double>();
        break;
      }
    }
  }
  const auto& keys = registered_keys();
  const auto info = std::find_if(keys.begin(), keys.end(), [&](const KeyInfo& k) { return k.name == key; });
  if (info == keys.end()) throw ConfigError("config: unknown key '" + key + "'");
  // null clears a key; accessors then report it as required
  bool ok = true;
  if (!value.is_null()) {
    switch (info->type) {
      case KeyType::number:
        ok = value.is_number() && std::isfinite(value.get<double>());
        break;
      case KeyType::integer:
        ok = value.is_number_integer() && value.get<long long>() >= 0;
        break;
      case KeyType::boolean:
        ok = value.is_boolean();
        break;
      case KeyType::string:
        ok = value.is_string();
        break;
    }
  }
  if (!ok) throw ConfigError("config: bad value for '" + key + "': " + value.dump());
  values_[key] = std::move(value);
  explicit_.insert(key);
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must be key=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  set(key, value);
}

const json& Config::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("config: unknown key '" + key + "'");
  return it->second;
}

bool Config::has(const std::string& key) const {
  const auto it = values_.find(key);
  return it != values_.end() && !it->second.is_null();
}

double Config::number(const std::string& key) const {
  const auto& v = raw(key);
  if (!v.is_number()) throw ConfigError("config: '" + key + "' is required");
  return v.get<double>();
}

std::optional<double> Config::optional_number(const std::string& key) const {
  const auto& v = raw(key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

std::size_t Config::integer(const std::string& key) const {
  const auto& v = raw(key);
  if (!v.is_number_integer()) throw ConfigError("config: '" + key + "' is required");
  return v.get<std::size_t>();
}

bool Config::boolean(const std::string& key) const {
  const auto& v = raw(key);
  if (!v.is_boolean()) throw ConfigError("config: '" + key + "' is required");
  return v.get<bool>();
}

std::string Config::string(const std::string& key) const {
  const auto& v = raw(key);
  if (!v.is_string()) throw ConfigError("config: '" + key + "' is required");
  return v.get<std::string>();
}

json Config::echo() const {
  json out = json::object();
  for (const auto& [k, v] : values_) out[k] = v;
  return out;
}

std::map<std::string, std::pair<std::optional<double>, std::optional<double>>> Config::targets() const {
  std::map<std::string, std::pair<std::optional<double>, std::optional<double>>> out;
  for (const auto& [k, v] : values_) {
    if (!is_target_key(k)) continue;
    const std::string name = k.substr(7, k.size() - 11);
    (ends_with(k, ".min") ? out[name].first : out[name].second) = v.get<double>();
  }
  return out;
}

device::DeviceSpec device_spec(const Config& c) {
  device::DeviceSpec s;
  s.beam.length_m = c.number("beam.length_m");
  s.beam.radius_m = c.number("beam.radius_m");
  s.beam.youngs_modulus_pa = c.number("beam.youngs_modulus_pa");
  s.beam.density_kg_m3 = c.number("beam.density_kg_m3");
  s.beam.relative_permittivity = c.number("beam.relative_permittivity");
  s.beam.quality_factor = c.number("beam.quality_factor");
  s.beam.textbook_inertia = c.boolean("beam.textbook_inertia");

  s.cavity.stripline_length_m = c.number("cavity.stripline_length_m");
  s.cavity.electrode_distance_m = c.number("cavity.electrode_distance_m");
  s.cavity.lateral_period_m = c.number("cavity.lateral_period_m");
  s.cavity.effective_permittivity = c.number("cavity.effective_permittivity");
  s.cavity.quality_factor = c.number("cavity.quality_factor");
  s.cavity.beam_x_m = c.number("cavity.beam_x_m");
  s.cavity.beam_y_m = c.number("cavity.beam_y_m");
  s.cavity.beam_z_m = c.number("cavity.beam_z_m");
  s.cavity.mode_amplitude = c.optional_number("cavity.mode_amplitude");
  s.cavity.mode_gradient_per_m = c.optional_number("cavity.mode_gradient_per_m");
  s.cavity.series_terms = c.integer("cavity.series_terms");

  const std::string variant = c.string("device.variant");
  if (variant == "gap") {
    s.variant = device::CouplingVariant::gap;
  } else if (variant == "electrode") {
    s.variant = device::CouplingVariant::electrode;
    device::ElectrodeConfig e;
    e.u0_v = c.optional_number("electrode.u0_v");
    e.capacitance_f = c.optional_number("electrode.capacitance_f");
    e.zeta = c.number("electrode.zeta");
    e.height_m = c.number("electrode.height_m");
    s.cavity.electrode = e;
  } else {
    throw ConfigError("config: device.variant must be gap or electrode, got " + variant);
  }

  s.drive.amplitude_v_per_m = c.number("drive.amplitude_v_per_m");
  s.drive.frequency_rad_s = c.optional_number("drive.frequency_rad_s");

  s.magnet.length_m = c.number("magnet.length_m");
  s.magnet.width_m = c.number("magnet.width_m");
  s.magnet.thickness_m = c.number("magnet.thickness_m");
  s.magnet.magnetization_a_per_m = c.number("magnet.magnetization_a_per_m");
  s.magnet.standoff_m = c.number("magnet.standoff_m");
  s.magnet.bias_field_t = c.number("magnet.bias_field_t");
  s.magnet.gradient_t_per_m = c.optional_number("magnet.gradient_t_per_m");

  s.temperature_k = c.number("device.temperature_k");
  s.gamma_s = c.number("device.gamma_s_per_s");
  return s;
}

ResolvedCouplings resolve_couplings(const Config& c) {
  ResolvedCouplings r;
  try {
    r.report = device::build_coupling_set(device_spec(c));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("device: ") + e.what());
  }
  r.set = r.report.set;
  auto apply = [&](const std::string& name, double& field) {
    ResolvedValue v;
    v.derived = field;
    if (const auto o = c.optional_number("coupling." + name)) {
      field = *o;
      v.overridden = true;
    }
    v.value = field;
    r.values[name] = v;
  };
  apply("omega_m_rad_s", r.set.omega_m);
  apply("g_rad_s", r.set.g);
  apply("lambda_rad_s", r.set.lambda);
  apply("kappa_per_s", r.set.kappa);
  apply("gamma_m_per_s", r.set.gamma_m);
  apply("gamma_s_per_s", r.set.gamma_s);
  apply("n_th", r.set.n_th);
  apply("delta_rad_s", r.set.delta);
  apply("omega_plus_rad_s", r.set.omega_plus);
  return r;
}

}  // namespace hybridsim::cli
