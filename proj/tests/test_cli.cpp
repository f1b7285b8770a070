#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hybridsim/cli/acceptance.hpp"
#include "hybridsim/cli/config.hpp"
#include "hybridsim/cli/scenarios.hpp"
#include "hybridsim/errors.hpp"

using namespace hybridsim;
using namespace hybridsim::cli;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("hybridsim_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const AcceptanceCheck& find_check(const CriterionReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("no check " + name);
}

}  // namespace

TEST_CASE("config: nested objects flatten, defaults fill the rest") {
  const auto c = Config::from_json(json::parse(R"({"scenario": "params", "beam": {"length_m": 5e-5}})"));
  CHECK(c.string("scenario") == "params");
  CHECK(c.number("beam.length_m") == 5e-5);
  CHECK(c.explicitly_set("beam.length_m"));
  CHECK_FALSE(c.explicitly_set("beam.radius_m"));
  CHECK(c.number("beam.radius_m") == 100e-9);
  CHECK(c.integer("numerics.mech_cutoff") == 6);
  CHECK_FALSE(c.has("coupling.g_rad_s"));
  CHECK_FALSE(c.optional_number("coupling.g_rad_s"));
}

TEST_CASE("config: unknown keys and type errors are rejected") {
  CHECK_THROWS_AS(Config::from_json(json::parse(R"({"beam": {"lenght_m": 1}})")), ConfigError);
  CHECK_THROWS_AS(Config::from_json(json::parse(R"({"beam.length_m": "long"})")), ConfigError);
  CHECK_THROWS_AS(Config::from_json(json::parse(R"({"numerics.mech_cutoff": 2.5})")), ConfigError);
  CHECK_THROWS_AS(Config::from_json(json::parse(R"({"rabi.dissipation": 1})")), ConfigError);
  CHECK_THROWS_AS(Config::from_json(json::parse("[1, 2]")), ConfigError);
  Config c;
  CHECK_THROWS_AS(c.string("scenario"), ConfigError);  // required, no default
}

TEST_CASE("config: _hz keys are stored as angular frequencies") {
  const auto c = Config::from_json(json::parse(R"({"coupling": {"g_hz": 16e3, "kappa_hz": 6e3}})"));
  CHECK(c.number("coupling.g_rad_s") == doctest::Approx(kTwoPi * 16e3).epsilon(1e-15));
  CHECK(c.number("coupling.kappa_per_s") == doctest::Approx(kTwoPi * 6e3).epsilon(1e-15));
  CHECK_THROWS_AS(Config::from_json(json::parse(R"({"coupling": {"n_th_hz": 1}})")), ConfigError);
}

TEST_CASE("config: overrides parse JSON values, fall back to strings, and null clears") {
  Config c;
  c.apply_override("beam.length_m=1e-4");
  CHECK(c.number("beam.length_m") == 1e-4);
  c.apply_override("scenario=rabi");
  CHECK(c.string("scenario") == "rabi");
  c.apply_override("rabi.dissipation=false");
  CHECK_FALSE(c.boolean("rabi.dissipation"));
  c.apply_override("coupling.g_hz=1000");
  CHECK(c.number("coupling.g_rad_s") == doctest::Approx(kTwoPi * 1e3));
  c.apply_override("coupling.g_rad_s=null");
  CHECK_FALSE(c.has("coupling.g_rad_s"));
  CHECK_THROWS_AS(c.apply_override("no_equals_sign"), ConfigError);
  CHECK_THROWS_AS(c.apply_override("nope.key=1"), ConfigError);
}

TEST_CASE("config: comments allowed in files; targets collected") {
  const auto dir = scratch("cfg");
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "c.json");
    f << "{\n  // a comment\n  \"scenario\": \"params\",\n  \"target\": {\"n_th\": {\"min\": 1, \"max\": 2}}\n}\n";
  }
  const auto c = Config::from_file(dir / "c.json");
  const auto t = c.targets();
  REQUIRE(t.count("n_th") == 1);
  CHECK(*t.at("n_th").first == 1.0);
  CHECK(*t.at("n_th").second == 2.0);
  CHECK_THROWS_AS(Config::from_file(dir / "missing.json"), ConfigError);
  {
    std::ofstream f(dir / "broken.json");
    f << "{\"scenario\": ";
  }
  CHECK_THROWS_AS(Config::from_file(dir / "broken.json"), ConfigError);
}

TEST_CASE("grid specifications") {
  const auto lin = parse_grid("1:3:5");
  REQUIRE(lin.size() == 5);
  CHECK(lin[1] == 1.5);
  CHECK(lin.back() == 3.0);
  const auto lg = parse_grid("log:1:100:3");
  REQUIRE(lg.size() == 3);
  CHECK(lg[1] == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(parse_grid("0.5,2,7") == std::vector<double>{0.5, 2.0, 7.0});
  CHECK(parse_grid("4:9:1") == std::vector<double>{4.0});
  for (const char* bad : {"", "1:2", "1:2:0", "1:2:2.5", "log:0:1:3", "a,b", "1:2:3:4"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_grid(bad), ConfigError);
  }
}

TEST_CASE("numbers round-trip through 17 significant digits") {
  for (double v : {0.1, 1.0 / 3.0, kTwoPi * 16e3, 1e-300, -2.5e17, 6.02214076e23}) {
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(std::nan("")) == "nan");

  const auto dir = scratch("csv");
  std::filesystem::create_directories(dir);
  write_csv(dir / "t.csv", {"t", {"t_s", "x"}, {{0.0, 1.0 / 3.0}, {1e-6, 2.0}}});
  CHECK(slurp(dir / "t.csv") == "t_s,x\n0,0.33333333333333331\n9.9999999999999995e-07,2\n");
}

TEST_CASE("params scenario reports the device couplings and override flags") {
  Config c;
  c.set("scenario", "params");
  const auto base = run_scenario(c);
  const auto rep = device::build_coupling_set(device_spec(c));
  CHECK(base.headlines["g_hz"].get<double>() == rep.set.g / kTwoPi);
  CHECK(base.headlines["omega_m_hz"].get<double>() == rep.set.omega_m / kTwoPi);
  CHECK_FALSE(base.resolved["couplings"]["g_rad_s"]["overridden"].get<bool>());

  c.set("coupling.g_rad_s", 123.0);
  const auto over = run_scenario(c);
  const auto& g = over.resolved["couplings"]["g_rad_s"];
  CHECK(g["overridden"].get<bool>());
  CHECK(g["value"].get<double>() == 123.0);
  CHECK(g["derived"].get<double>() == rep.set.g);
  CHECK(over.headlines["g_hz"].get<double>() == 123.0 / kTwoPi);
}

TEST_CASE("targets decide the pass flag") {
  Config c;
  c.set("scenario", "params");
  c.set("target.n_th.min", 900.0);
  c.set("target.n_th.max", 1500.0);
  auto out = run_scenario(c);
  CHECK(out.passed);
  REQUIRE(out.targets.size() == 1);
  CHECK(out.targets[0].passed);
  c.set("target.n_th.max", 10.0);
  out = run_scenario(c);
  CHECK_FALSE(out.passed);
  c.set("target.nonexistent.max", 1.0);
  CHECK_THROWS_AS(run_scenario(c), ConfigError);
}

TEST_CASE("scenario input errors are config errors") {
  Config c;
  CHECK_THROWS_AS(run_scenario(c), ConfigError);  // no scenario
  c.set("scenario", "teleport");
  CHECK_THROWS_AS(run_scenario(c), ConfigError);
  c.set("scenario", "params");
  c.set("beam.length_m", -1.0);
  CHECK_THROWS_AS(run_scenario(c), ConfigError);

  Config e;
  e.set("scenario", "effective");
  CHECK_THROWS_AS(run_scenario(e), ConfigError);  // delta1 required

  Config t;
  t.set("scenario", "transfer");
  t.set("transfer.shape", "triangle");
  CHECK_THROWS_AS(run_scenario(t), ConfigError);

  Config s;
  CHECK_THROWS_AS(run_sweep(s, "scenario", {1.0}), ConfigError);     // not numeric
  CHECK_THROWS_AS(run_sweep(s, "beam.nope", {1.0}), ConfigError);    // unknown
  CHECK_THROWS_AS(run_sweep(s, "beam.length_m", {}), ConfigError);   // empty grid
}

TEST_CASE("length sweep finds the g = lambda crossing") {
  Config c;
  const auto out = run_sweep(c, "beam.length_m", parse_grid("20e-6:200e-6:37"));
  REQUIRE(out.tables.size() == 1);
  CHECK(out.tables[0].rows.size() == 37);
  CHECK(out.tables[0].columns[0] == "beam.length_m");
  const double cross = out.headlines["g_lambda_crossing"].get<double>();
  CHECK(cross > 80e-6);
  CHECK(cross < 95e-6);
  CHECK(out.headlines["abs_lambda_trend"].get<int>() == 1);
}

TEST_CASE("cool_steady sweep tabulates the steady occupancy") {
  Config c;
  c.set("coupling.omega_m_rad_s", kTwoPi * 320e3);
  c.set("coupling.delta_rad_s", kTwoPi * 320e3);
  c.set("coupling.kappa_per_s", kTwoPi * 6e3);
  c.set("coupling.gamma_m_per_s", kTwoPi * 3.2);
  c.set("coupling.n_th", 1000.0);
  c.set("sweep.base", "cool_steady");
  const auto out = run_sweep(c, "cool.g_over_kappa", {0.1, 1.0, 10.0});
  const auto& rows = out.tables[0].rows;
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][1] > rows[1][1]);  // stronger coupling cools further
  CHECK(rows[1][1] < 1.0);
  CHECK(rows[2][6] == doctest::Approx(10.0 * kTwoPi * 6e3));
}

TEST_CASE("artifacts: tables, summary echo, and reconstruction from the summary") {
  Config c;
  c.set("scenario", "cool");
  c.set("coupling.omega_m_hz", 320e3);
  c.set("coupling.delta_hz", 320e3);
  c.set("coupling.g_hz", 16e3);
  c.set("coupling.kappa_hz", 6e3);
  c.set("coupling.gamma_m_hz", 3.2);
  c.set("coupling.n_th", 1000.0);
  c.set("numerics.samples", 51);
  const auto out = run_scenario(c);
  const auto dir = scratch("artifacts");
  write_artifacts(dir, out, c, 0.5);
  CHECK(std::filesystem::exists(dir / "trajectory.csv"));
  const auto summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary["scenario"] == "cool");
  CHECK(summary["wall_clock_s"] == 0.5);
  CHECK(summary["config"]["coupling.g_rad_s"].get<double>() == doctest::Approx(kTwoPi * 16e3));

  // rerun from the echoed config: identical tables
  const auto again = run_scenario(Config::from_json(summary["config"]));
  const auto dir2 = scratch("artifacts2");
  write_artifacts(dir2, again, c, 0.5);
  CHECK(slurp(dir / "trajectory.csv") == slurp(dir2 / "trajectory.csv"));
  CHECK(slurp(dir / "summary.json") == slurp(dir2 / "summary.json"));
}

TEST_CASE("shipped presets parse") {
  const std::filesystem::path presets = HYBRIDSIM_PRESET_DIR;
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(presets)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    const auto c = Config::from_file(entry.path());
    CHECK(c.has("scenario"));
    ++n;
  }
  CHECK(n == 7);
  const auto p = Config::from_file(presets / "params_sec3.json");
  CHECK(run_scenario(p).passed);
  const auto e = Config::from_file(presets / "effective_sec4b.json");
  const auto eo = run_scenario(e);
  CHECK(eo.passed);
  CHECK(eo.headlines["g_eff_over_g"].get<double>() == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("criterion list and filter") {
  const auto& list = acceptance_criteria();
  REQUIRE(list.size() == 12);
  for (std::size_t i = 0; i < list.size(); ++i) CHECK(list[i].id == static_cast<int>(i + 1));
  CHECK(parse_criterion_filter("").size() == 12);
  CHECK(parse_criterion_filter("3,c08,C12") == std::vector<int>{3, 8, 12});
  CHECK_THROWS_AS(parse_criterion_filter("13"), ConfigError);
  CHECK_THROWS_AS(parse_criterion_filter("x"), ConfigError);
  CHECK_THROWS_AS(run_criterion(0), ConfigError);
}

TEST_CASE("perturbing Young's modulus fails the beam-frequency check only") {
  Config stiff;
  stiff.set("beam.youngs_modulus_pa", 2.0 * 1.05e12);
  const auto c1 = run_criterion(1, stiff);
  CHECK_FALSE(c1.passed);
  CHECK_FALSE(find_check(c1, "omega_m_khz").passed);
  CHECK(find_check(run_criterion(1), "omega_m_khz").passed);
  for (int id : {2, 4, 6, 7}) {
    CAPTURE(id);
    CHECK(run_criterion(id, stiff).passed);
  }
  // the unperturbed report is stable under a round trip to JSON
  const auto j = to_json(run_criterion(2));
  CHECK(j["id"] == 2);
  CHECK(j["passed"].get<bool>());
  CHECK(format_report_line(run_criterion(2)).rfind("c02 PASS", 0) == 0);
}
