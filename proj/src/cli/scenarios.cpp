#include "hybridsim/cli/scenarios.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "hybridsim/cli/acceptance.hpp"
#include "hybridsim/cooling/analysis.hpp"
#include "hybridsim/cooling/moments.hpp"
#include "hybridsim/errors.hpp"
#include "hybridsim/interface/effective.hpp"
#include "hybridsim/interface/transfer.hpp"

namespace hybridsim::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

quantum::EvolveOptions evolve_options(const Config& c) {
  quantum::EvolveOptions o;
  o.rtol = c.number("numerics.rtol");
  o.atol = c.number("numerics.atol");
  o.check_positivity = c.boolean("numerics.check_positivity");
  return o;
}

std::vector<double> linear_grid(double t_max, std::size_t samples) {
  if (!(t_max > 0.0) || samples < 2) throw ConfigError("time grid needs t_max > 0 and at least 2 samples");
  std::vector<double> t(samples);
  for (std::size_t k = 0; k < samples; ++k) t[k] = t_max * static_cast<double>(k) / static_cast<double>(samples - 1);
  return t;
}

json couplings_json(const ResolvedCouplings& r) {
  json j = json::object();
  for (const auto& [name, v] : r.values) {
    j[name] = {{"value", v.value}, {"derived", v.derived}, {"overridden", v.overridden}};
  }
  return j;
}

json invariants_json(const quantum::InvariantReport& r) {
  return {{"max_trace_error", r.max_trace_error},
          {"max_hermiticity_error", r.max_hermiticity_error},
          {"min_eigenvalue", std::isfinite(r.min_eigenvalue) ? json(r.min_eigenvalue) : json()},
          {"renormalizations", r.renormalizations},
          {"checks", r.checks},
          {"rhs_evaluations", r.ode.rhs_evaluations},
          {"accepted_steps", r.ode.accepted},
          {"rejected_steps", r.ode.rejected}};
}

CsvTable series_table(const std::string& name, const TimeSeries& s, const std::vector<std::string>& columns) {
  CsvTable t{name, {"t_s"}, {}};
  for (const auto& c : columns) t.columns.push_back(c);
  for (std::size_t k = 0; k < s.size(); ++k) {
    std::vector<double> row{s.times()[k]};
    for (const auto& c : columns) row.push_back(s.at(k, c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

cooling::CoolingParams cooling_params(const Config& c, const ResolvedCouplings& r) {
  cooling::CoolingParams p{r.set.g, r.set.omega_m, r.set.delta, r.set.kappa, r.set.gamma_m, r.set.n_th};
  if (const auto ratio = c.optional_number("cool.g_over_kappa")) p.g = *ratio * p.kappa;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

interface::TripartiteParams tripartite_params(const Config& c, const ResolvedCouplings& r) {
  interface::TripartiteParams p;
  p.omega_plus = r.set.omega_plus;
  p.omega_m = r.set.omega_m;
  p.delta = r.set.delta;
  p.g = r.set.g;
  p.lambda = r.set.lambda;
  p.kappa = r.set.kappa;
  p.gamma_m = r.set.gamma_m;
  p.gamma_s = r.set.gamma_s;
  p.n_th = r.set.n_th;
  p.cutoffs = {c.integer("numerics.mech_cutoff"), c.integer("numerics.cav_cutoff")};
  return p;
}

json tripartite_json(const interface::TripartiteParams& p) {
  return {{"omega_plus_rad_s", p.omega_plus}, {"omega_m_rad_s", p.omega_m}, {"delta_rad_s", p.delta},
          {"g_rad_s", p.g},                   {"lambda_rad_s", p.lambda},   {"kappa_per_s", p.kappa},
          {"gamma_m_per_s", p.gamma_m},       {"gamma_s_per_s", p.gamma_s}, {"n_th", p.n_th},
          {"mech_cutoff", p.cutoffs.mechanics}, {"cav_cutoff", p.cutoffs.cavity}};
}

void validate_tripartite(const interface::TripartiteParams& p) {
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

RunOutput run_params(const Config& c) {
  RunOutput out;
  const auto r = resolve_couplings(c);
  const auto& rep = r.report;
  out.resolved["couplings"] = couplings_json(r);
  out.resolved["magnet_gradient_t_per_m"] = rep.magnet_gradient;
  auto& h = out.headlines;
  h["omega_c_hz"] = rep.set.omega_c / kTwoPi;
  h["field_amplitude_v_per_m"] = rep.set.field_amplitude;
  h["omega_m_hz"] = r.set.omega_m / kTwoPi;
  h["omega_1_hz"] = rep.set.omega_1 / kTwoPi;
  h["g_hz"] = r.set.g / kTwoPi;
  h["lambda_hz"] = r.set.lambda / kTwoPi;
  h["kappa_hz"] = r.set.kappa / kTwoPi;
  h["gamma_m_hz"] = r.set.gamma_m / kTwoPi;
  h["gamma_s_hz"] = r.set.gamma_s / kTwoPi;
  h["n_th"] = r.set.n_th;
  h["x_zpf_m"] = rep.set.x_zpf;
  h["mass_kg"] = rep.set.mass;
  h["omega_plus_hz"] = r.set.omega_plus / kTwoPi;
  h["magnet_gradient_t_per_m"] = rep.magnet_gradient;
  h["dipole_gradient_estimate_t_per_m"] = rep.dipole_gradient_estimate;
  h["mode_separation_over_g"] = rep.separation.ratio;
  h["gamma_sc_hz"] = rep.decoherence.gamma_sc_hz;
  h["spin_spin_hz"] = rep.decoherence.spin_spin_hz;
  const double loss = r.set.gamma_m * r.set.kappa;
  h["cooperativity"] = loss > 0.0 ? 4.0 * r.set.g * r.set.g / loss : std::numeric_limits<double>::infinity();
  out.details["flags"] = {{"strong_coupling", rep.strong.holds},
                          {"mode_separation_ok", rep.separation.ok},
                          {"cpw_series_converged", rep.mode.series_converged},
                          {"cpw_anchored", rep.mode.anchored},
                          {"gamma_sc_negligible", rep.decoherence.gamma_sc_negligible},
                          {"spin_spin_negligible", rep.decoherence.spin_spin_negligible}};
  return out;
}

RunOutput run_cool(const Config& c) {
  RunOutput out;
  const auto r = resolve_couplings(c);
  const auto p = cooling_params(c, r);
  out.resolved["couplings"] = couplings_json(r);
  out.resolved["cooling"] = {{"g_rad_s", p.g},           {"omega_m_rad_s", p.omega_m}, {"delta_rad_s", p.delta},
                             {"kappa_per_s", p.kappa},   {"gamma_m_per_s", p.gamma_m}, {"n_th", p.n_th}};
  const double n_b0 = c.optional_number("cool.n_b0").value_or(p.n_th);
  out.resolved["cooling"]["n_b0"] = n_b0;

  const auto times = linear_grid(c.number("cool.t_max_s"), c.integer("numerics.samples"));
  cooling::MomentState m0;
  m0.n_b = n_b0;
  const auto traj = cooling::evolve_moments(p, m0, times);
  out.tables.push_back(series_table("trajectory", traj.series, {"n_a", "n_b"}));

  const auto steady = cooling::steady_moments(p);
  const auto f = cooling::final_occupancy_formulas(p);
  const auto s = cooling::stability_and_cooperativity(p);
  auto& h = out.headlines;
  h["n_f"] = steady.n_b;
  h["n_a_steady"] = steady.n_a;
  h["n_f_weak"] = f.weak;
  h["n_f_strong"] = f.strong_valid ? json(f.strong) : json();
  h["cooling_rate_per_s"] = f.cooling_rate;
  h["cooperativity"] = s.cooperativity;
  h["n_b_final"] = traj.final_state.n_b;
  h["min_occupation"] = traj.min_occupation;

  // first sample below one, and the start of the final run below one
  const auto nb = traj.series.column("n_b");
  json first = json(), settle = json();
  for (std::size_t k = 0; k < nb.size(); ++k) {
    if (nb[k] < 1.0 && first.is_null()) first = times[k];
  }
  if (!nb.empty() && nb.back() < 1.0) {
    std::size_t k = nb.size() - 1;
    while (k > 0 && nb[k - 1] < 1.0) --k;
    settle = times[k];
  }
  h["first_below_one_s"] = first;
  h["settled_below_one_s"] = settle;  // within the run horizon only
  out.details["flags"] = {{"stable", s.stable},
                          {"high_cooperativity", s.high_cooperativity},
                          {"sideband_resolved", s.sideband_resolved}};
  return out;
}

RunOutput run_rabi(const Config& c) {
  RunOutput out;
  const auto r = resolve_couplings(c);
  auto p = tripartite_params(c, r);
  if (c.boolean("rabi.resonant")) p.omega_plus = p.delta = p.omega_m;
  validate_tripartite(p);
  out.resolved["couplings"] = couplings_json(r);
  out.resolved["tripartite"] = tripartite_json(p);

  interface::RabiOptions o;
  o.t_max = c.number("rabi.t_max_s");
  o.samples = c.integer("numerics.samples");
  o.dissipation = c.boolean("rabi.dissipation");
  o.n_m0 = c.number("rabi.n_m0");
  o.evolve = evolve_options(c);
  if (o.samples < 2 || !(o.t_max > 0.0)) throw ConfigError("rabi: need t_max_s > 0 and samples >= 2");
  const auto res = interface::rabi_scenario(p, o);

  out.tables.push_back(series_table("trajectory", res.series, {"P_spin", "n_a", "n_b", "n_exc"}));
  CsvTable dist{"photon_distribution", {"n", "p"}, {}};
  for (std::size_t n = 0; n < res.photon_distribution.size(); ++n) {
    dist.rows.push_back({static_cast<double>(n), res.photon_distribution[n]});
  }
  out.tables.push_back(std::move(dist));

  const auto ps = res.series.column("P_spin");
  const auto na = res.series.column("n_a");
  const auto nx = res.series.column("n_exc");
  auto& h = out.headlines;
  h["t_half_s"] = res.t_half;
  h["min_P_spin"] = *std::min_element(ps.begin(), ps.end());
  h["max_n_a"] = *std::max_element(na.begin(), na.end());
  h["final_P_spin"] = ps.back();
  double drift = 0.0;
  for (double x : nx) drift = std::max(drift, std::abs(x - nx.front()));
  h["n_exc_drift"] = drift;
  h["photon_one_at_t_half"] = res.photon_distribution.size() > 1 ? json(res.photon_distribution[1]) : json();
  out.details["invariants"] = invariants_json(res.invariants);
  return out;
}

RunOutput run_transfer(const Config& c) {
  RunOutput out;
  const auto r = resolve_couplings(c);
  auto p = tripartite_params(c, r);
  p.omega_plus = p.delta = p.omega_m;
  validate_tripartite(p);

  interface::PulseSchedule s;
  const std::string shape = c.string("transfer.shape");
  if (shape == "gaussian") {
    s.shape = interface::PulseSchedule::Shape::gaussian;
  } else if (shape == "constant") {
    s.shape = interface::PulseSchedule::Shape::constant;
  } else {
    throw ConfigError("transfer.shape must be gaussian or constant, got " + shape);
  }
  s.g0 = c.optional_number("transfer.g0_rad_s").value_or(1.8 * p.lambda);
  s.width = c.number("transfer.width_s2");
  s.t_start = c.number("transfer.t_start_s");
  s.t_end = c.optional_number("transfer.t_end_s")
                .value_or(interface::PulseSchedule::gaussian_from_peak(s.g0, s.width).t_end);
  p.g = s.g0;

  interface::StirapOptions o;
  o.samples = c.integer("numerics.samples");
  o.n_m0 = c.number("transfer.n_m0");
  const double angle = c.number("transfer.spin_angle_rad");
  o.spin_state = Eigen::Vector2cd(std::sin(0.5 * angle), std::cos(0.5 * angle));
  o.cutoff_check = c.boolean("transfer.cutoff_check");
  o.evolve = evolve_options(c);

  out.resolved["couplings"] = couplings_json(r);
  out.resolved["tripartite"] = tripartite_json(p);
  out.resolved["schedule"] = {{"shape", shape},         {"g0_rad_s", s.g0},       {"width_s2", s.width},
                              {"t_start_s", s.t_start}, {"t_end_s", s.t_end},
                              {"g_end_rad_s", s.at(s.t_end)}};

  const auto res = interface::stirap_transfer(p, s, o);
  out.tables.push_back(series_table("trajectory", res.series, {"P_spin", "n_a", "n_b", "theta"}));
  out.tables.back().columns.back() = "theta_rad";
  CsvTable rho{"cavity_state", {"row", "col", "re", "im"}, {}};
  for (Eigen::Index i = 0; i < res.cavity_state.rows(); ++i)
    for (Eigen::Index j = 0; j < res.cavity_state.cols(); ++j)
      rho.rows.push_back({static_cast<double>(i), static_cast<double>(j), res.cavity_state(i, j).real(),
                          res.cavity_state(i, j).imag()});
  out.tables.push_back(std::move(rho));

  auto& h = out.headlines;
  h["fidelity"] = res.fidelity;
  h["fidelity_unmaximized"] = res.fidelity_unmaximized;
  h["optimal_phase_rad"] = res.optimal_phase;
  h["max_adiabaticity"] = res.max_adiabaticity;
  h["final_mixing_angle_rad"] = res.final_mixing_angle;
  h["final_P_spin"] = res.series.back("P_spin");
  h["final_n_a"] = res.series.back("n_a");
  h["final_n_b"] = res.series.back("n_b");
  if (o.cutoff_check) h["cutoff_fidelity_change"] = res.cutoff_fidelity_change;
  out.details["invariants"] = invariants_json(res.invariants);
  return out;
}

RunOutput run_effective(const Config& c) {
  RunOutput out;
  const auto r = resolve_couplings(c);
  auto p = tripartite_params(c, r);
  const auto delta1 = c.optional_number("effective.delta1_rad_s");
  if (!delta1) throw ConfigError("effective.delta1_rad_s is required");
  p.omega_plus = p.omega_m - *delta1;
  p.delta = p.omega_plus + c.number("effective.delta2_rad_s");
  validate_tripartite(p);
  out.resolved["couplings"] = couplings_json(r);
  out.resolved["tripartite"] = tripartite_json(p);

  interface::EffectiveParams e;
  try {
    e = interface::effective_params(p);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
  if (e.g_eff == 0.0) throw ConfigError("effective: g_eff = 0, no Rabi period to cover");
  const double horizon = c.number("effective.periods") * std::numbers::pi / std::abs(e.g_eff);
  const auto cmp = interface::effective_vs_full_comparison(p, horizon, c.integer("numerics.samples"),
                                                           evolve_options(c));
  CsvTable t{"trajectory", {"t_s", "trace_distance", "fidelity", "P_spin_full", "P_spin_effective"}, {}};
  for (std::size_t k = 0; k < cmp.times.size(); ++k) {
    t.rows.push_back({cmp.times[k], cmp.trace_distance[k], cmp.fidelity[k], cmp.spin_population_full[k],
                      cmp.spin_population_effective[k]});
  }
  out.tables.push_back(std::move(t));

  auto& h = out.headlines;
  h["delta1_rad_s"] = e.delta1;
  h["delta2_rad_s"] = e.delta2;
  h["alpha"] = e.alpha;
  h["beta"] = e.beta;
  h["g_eff_hz"] = e.g_eff / kTwoPi;
  h["g_eff_over_g"] = p.g != 0.0 ? json(e.g_eff / p.g) : json();
  h["kappa_eff1_per_s"] = e.kappa_eff1;
  h["kappa_eff2_per_s"] = e.kappa_eff2;
  h["gamma_eff1_per_s"] = e.gamma_eff1;
  h["gamma_eff2_per_s"] = e.gamma_eff2;
  h["max_trace_distance"] = cmp.max_trace_distance;
  h["max_trace_distance_unmapped"] = cmp.max_trace_distance_unmapped;
  h["rabi_frequency_rad_s"] = cmp.rabi_frequency;
  h["rabi_over_2g_eff"] = cmp.rabi_frequency / (2.0 * std::abs(e.g_eff));
  out.details["flags"] = {{"adiabatic", e.adiabatic}};
  out.details["invariants"] = {{"full", invariants_json(cmp.full_invariants)},
                               {"effective", invariants_json(cmp.effective_invariants)}};
  return out;
}

RunOutput run_validate(const Config& c) {
  RunOutput out;
  const auto ids = parse_criterion_filter(c.has("validate.filter") ? c.string("validate.filter") : "");
  json reports = json::array();
  int passed = 0;
  for (int id : ids) {
    const auto rep = run_criterion(id, c);
    reports.push_back(to_json(rep));
    passed += rep.passed ? 1 : 0;
  }
  out.details["criteria"] = reports;
  out.headlines["criteria_run"] = ids.size();
  out.headlines["criteria_passed"] = passed;
  out.passed = passed == static_cast<int>(ids.size());
  CsvTable t{"criteria", {"id", "passed", "runtime_s"}, {}};
  for (const auto& rj : reports) {
    t.rows.push_back({rj["id"].get<double>(), rj["passed"].get<bool>() ? 1.0 : 0.0, rj["runtime_s"].get<double>()});
  }
  out.tables.push_back(std::move(t));
  return out;
}

void evaluate_targets(const Config& c, RunOutput& out) {
  for (const auto& [name, range] : c.targets()) {
    if (!out.headlines.contains(name)) throw ConfigError("target refers to unknown headline '" + name + "'");
    const auto& v = out.headlines[name];
    TargetCheck t;
    t.name = name;
    t.min = range.first;
    t.max = range.second;
    t.value = v.is_number() ? v.get<double>() : std::numeric_limits<double>::quiet_NaN();
    t.passed = v.is_number() && (!t.min || t.value >= *t.min) && (!t.max || t.value <= *t.max);
    out.passed = out.passed && t.passed;
    out.targets.push_back(t);
  }
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  auto to_double = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("grid: bad number '" + s + "' in '" + spec + "'");
    }
  };
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
  };
  if (spec.empty()) throw ConfigError("grid: empty specification");
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    auto parts = split(spec, ':');
    const bool log = !parts.empty() && parts.front() == "log";
    if (log) parts.erase(parts.begin());
    if (parts.size() != 3) throw ConfigError("grid: expected a:b:n or log:a:b:n, got '" + spec + "'");
    const double a = to_double(parts[0]), b = to_double(parts[1]);
    const double nd = to_double(parts[2]);
    if (nd < 1 || nd != std::floor(nd)) throw ConfigError("grid: point count must be a positive integer");
    const auto n = static_cast<std::size_t>(nd);
    if (log && !(a > 0.0 && b > 0.0)) throw ConfigError("grid: log grid needs positive ends");
    for (std::size_t k = 0; k < n; ++k) {
      const double f = n == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n - 1);
      out.push_back(log ? a * std::pow(b / a, f) : a + (b - a) * f);
    }
  } else {
    for (const auto& s : split(spec, ',')) out.push_back(to_double(s));
  }
  return out;
}

RunOutput run_scenario(const Config& config) {
  if (!config.has("scenario")) throw ConfigError("config: 'scenario' is required");
  const std::string scenario = config.string("scenario");
  RunOutput out;
  if (scenario == "params") {
    out = run_params(config);
  } else if (scenario == "cool") {
    out = run_cool(config);
  } else if (scenario == "rabi") {
    out = run_rabi(config);
  } else if (scenario == "transfer") {
    out = run_transfer(config);
  } else if (scenario == "effective") {
    out = run_effective(config);
  } else if (scenario == "validate") {
    out = run_validate(config);
  } else if (scenario == "sweep") {
    if (!config.has("sweep.variable") || !config.has("sweep.grid")) {
      throw ConfigError("sweep: sweep.variable and sweep.grid are required");
    }
    return run_sweep(config, config.string("sweep.variable"), parse_grid(config.string("sweep.grid")));
  } else {
    throw ConfigError("config: unknown scenario '" + scenario + "'");
  }
  out.scenario = scenario;
  evaluate_targets(config, out);
  return out;
}

RunOutput run_sweep(const Config& config, const std::string& variable, const std::vector<double>& grid) {
  const auto& keys = registered_keys();
  const auto info = std::find_if(keys.begin(), keys.end(), [&](const KeyInfo& k) { return k.name == variable; });
  if (info == keys.end() || info->type != KeyType::number) {
    throw ConfigError("sweep: '" + variable + "' is not a numeric config key");
  }
  if (grid.empty()) throw ConfigError("sweep: empty grid");
  const std::string base = config.string("sweep.base");
  if (base != "params" && base != "cool_steady") throw ConfigError("sweep.base must be params or cool_steady");

  RunOutput out;
  out.scenario = "sweep";
  out.resolved["variable"] = variable;
  out.resolved["base"] = base;
  out.resolved["grid"] = grid;

  CsvTable t{"sweep", {variable}, {}};
  if (base == "params") {
    for (const char* c : {"omega_m_hz", "g_hz", "lambda_hz", "kappa_hz", "gamma_m_hz", "n_th", "mode_separation_over_g"})
      t.columns.push_back(c);
  } else {
    for (const char* c : {"n_b_steady", "n_a_steady", "n_f_weak", "n_f_strong", "cooling_rate_per_s", "g_rad_s"})
      t.columns.push_back(c);
  }

  std::vector<device::LengthSweepPoint> crossing_points;
  for (double v : grid) {
    Config point = config;
    point.set(variable, v);
    const auto r = resolve_couplings(point);
    if (base == "params") {
      t.rows.push_back({v, r.set.omega_m / kTwoPi, r.set.g / kTwoPi, r.set.lambda / kTwoPi, r.set.kappa / kTwoPi,
                        r.set.gamma_m / kTwoPi, r.set.n_th, r.report.separation.ratio});
      crossing_points.push_back({v, r.set.omega_m, r.set.g, r.set.lambda});
    } else {
      const auto p = cooling_params(point, r);
      const auto s = cooling::steady_moments(p);
      const auto f = cooling::final_occupancy_formulas(p);
      t.rows.push_back({v, s.n_b, s.n_a, f.weak, f.strong_valid ? f.strong : std::numeric_limits<double>::quiet_NaN(),
                        f.cooling_rate, p.g});
    }
  }
  out.headlines["points"] = grid.size();
  if (base == "params") {
    // |g| = |lambda| crossing along the swept variable
    const auto cross = grid.size() > 1 ? device::coupling_crossing(crossing_points) : std::nullopt;
    out.headlines["g_lambda_crossing"] = cross ? json(*cross) : json();
    // +1 rising, -1 falling, 0 neither, along the grid
    auto trend = [&](std::size_t col) {
      bool up = true, down = true;
      for (std::size_t k = 1; k < t.rows.size(); ++k) {
        const double d = std::abs(t.rows[k][col]) - std::abs(t.rows[k - 1][col]);
        up = up && d > 0.0;
        down = down && d < 0.0;
      }
      return grid.size() < 2 ? 0 : up ? 1 : down ? -1 : 0;
    };
    out.headlines["abs_g_trend"] = trend(2);
    out.headlines["abs_lambda_trend"] = trend(3);
    out.headlines["omega_m_trend"] = trend(1);
  } else {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& row : t.rows) lo = std::min(lo, row[1]);
    out.headlines["min_n_b_steady"] = lo;
  }
  out.tables.push_back(std::move(t));
  evaluate_targets(config, out);
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

json run_summary(const RunOutput& out, const Config& config, double wall_clock_s) {
  json targets = json::array();
  for (const auto& t : out.targets) {
    targets.push_back({{"name", t.name},
                       {"value", std::isfinite(t.value) ? json(t.value) : json()},
                       {"min", t.min ? json(*t.min) : json()},
                       {"max", t.max ? json(*t.max) : json()},
                       {"passed", t.passed}});
  }
  json artifacts = json::array();
  for (const auto& t : out.tables) artifacts.push_back(t.name + ".csv");
  json headlines = out.headlines;
  for (auto& [k, v] : headlines.items()) {
    if (v.is_number_float() && !std::isfinite(v.get<double>())) v = nullptr;
  }
  return {{"scenario", out.scenario},
          {"passed", out.passed},
          {"headlines", headlines},
          {"targets", targets},
          {"resolved", out.resolved},
          {"details", out.details},
          {"config", config.echo()},
          {"artifacts", artifacts},
          {"wall_clock_s", wall_clock_s}};
}

void write_artifacts(const std::filesystem::path& dir, const RunOutput& out, const Config& config,
                     double wall_clock_s) {
  std::filesystem::create_directories(dir);
  for (const auto& t : out.tables) write_csv(dir / (t.name + ".csv"), t);
  std::ofstream js(dir / "summary.json");
  if (!js) throw std::runtime_error("cannot write " + (dir / "summary.json").string());
  js << run_summary(out, config, wall_clock_s).dump(2) << '\n';
}

}  // namespace hybridsim::cli
