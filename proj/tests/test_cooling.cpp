#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "hybridsim/cooling/analysis.hpp"
#include "hybridsim/cooling/moments.hpp"
#include "hybridsim/errors.hpp"
#include "hybridsim/quantum/lindblad.hpp"

using namespace hybridsim;
using namespace hybridsim::cooling;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CoolingParams cooling_set(double n_th) {
  return {kTwoPi * 16e3, kTwoPi * 320e3, kTwoPi * 320e3, kTwoPi * 6e3, kTwoPi * 3.2, n_th};
}

// Random density matrix supported on Fock pairs with n_a, n_b <= max_n.
Eigen::MatrixXcd low_fock_state(const TwoModeBasis& basis, std::size_t max_n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const auto d = static_cast<Eigen::Index>(basis.dim());
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto& oi = basis.occupations()[static_cast<std::size_t>(i)];
    if (oi[0] > max_n || oi[1] > max_n) continue;
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = {g(rng), g(rng)};
  }
  Eigen::MatrixXcd rho = x * x.adjoint();
  return rho / rho.trace();
}

double slowest_decay_rate(const CoolingParams& p) {
  double a[12][12];
  double b[12];
  moment_system(p, a, b);
  Eigen::MatrixXd m(12, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) m(i, j) = a[i][j];
  return -m.eigenvalues().real().maxCoeff();
}

}  // namespace

TEST_CASE("moment equations equal master-equation moments of the derivative") {
  // d<O>/dt = Tr(O L[rho]) is linear in rho, so applying the moment map to
  // L[rho] must reproduce moment_rhs exactly while the state sits well below
  // the cutoff.
  const CoolingParams p{0.7, 3.0, 2.5, 0.4, 0.1, 1.5};
  const auto basis = TwoModeBasis::product({9, 9});
  const auto model = cooling_master_equation(p, basis);
  for (unsigned seed : {1u, 2u, 3u}) {
    const Eigen::MatrixXcd rho = low_fock_state(basis, 3, seed);
    const MomentState expected = moments_of(basis, quantum::dense_lindblad_rhs(model, 0.0, rho));
    const MomentState got = moment_rhs(moments_of(basis, rho), p);
    CHECK(got.n_a == doctest::Approx(expected.n_a).epsilon(1e-12));
    CHECK(got.n_b == doctest::Approx(expected.n_b).epsilon(1e-12));
    CHECK(std::abs(got.c_ab - expected.c_ab) < 1e-12);
    CHECK(std::abs(got.s_ab - expected.s_ab) < 1e-12);
    CHECK(std::abs(got.s_aa - expected.s_aa) < 1e-12);
    CHECK(std::abs(got.s_bb - expected.s_bb) < 1e-12);
  }
}

TEST_CASE("real packing round-trips") {
  MomentState m{1.5, 2.5, {0.1, -0.2}, {0.3, 0.4}, {-0.5, 0.6}, {0.7, -0.8}};
  const auto x = m.to_real();
  const auto back = MomentState::from_real(x.data());
  CHECK(back.n_a == m.n_a);
  CHECK(back.s_bb == m.s_bb);
  CHECK(back.c_ab == m.c_ab);
}

TEST_CASE("decoupled beam decays to the bath") {
  CoolingParams p = cooling_set(0.0);
  p.g = 0.0;
  MomentState m0;
  m0.n_b = 5.0;
  std::vector<double> times;
  for (int k = 0; k <= 10; ++k) times.push_back(0.01 * k);
  const auto traj = evolve_moments(p, m0, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    CHECK(traj.series.at(k, "n_b") == doctest::Approx(5.0 * std::exp(-p.gamma_m * times[k])).epsilon(1e-8));
  }

  p.n_th = 7.0;
  const auto ss = steady_moments(p);
  CHECK(ss.n_b == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(std::abs(ss.n_a) < 1e-14);
}

TEST_CASE("steady state matches the analytic limits") {
  for (double n_th : {0.0, 10.0, 1000.0}) {
    CAPTURE(n_th);
    CoolingParams weak = cooling_set(n_th);
    weak.g = weak.kappa / 20.0;
    const double nw = steady_moments(weak).n_b;
    CHECK(std::abs(nw / final_occupancy_formulas(weak).weak - 1.0) < 0.05);

    CoolingParams strong = cooling_set(n_th);
    strong.g = strong.omega_m / 20.0;
    strong.kappa = strong.g / 10.0;
    const double ns = steady_moments(strong).n_b;
    CHECK(std::abs(ns / final_occupancy_formulas(strong).strong - 1.0) < 0.10);
  }
}

TEST_CASE("weak-coupling limit is recovered monotonically") {
  double previous = std::numeric_limits<double>::infinity();
  for (double ratio : {0.05, 0.02, 0.01}) {
    CoolingParams p = cooling_set(2.0);
    p.g = ratio * p.kappa;
    const double err = std::abs(steady_moments(p).n_b / final_occupancy_formulas(p).weak - 1.0);
    CAPTURE(ratio);
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("closed forms") {
  const auto p = cooling_set(1000.0);
  const auto f = final_occupancy_formulas(p);
  CHECK(f.cooling_rate == doctest::Approx(4.0 * p.g * p.g / p.kappa));
  CHECK(f.strong_valid);
  const double expected = p.gamma_m * 1000.0 / (p.kappa + p.gamma_m) +
                          p.g * p.g / (2.0 * (p.omega_m * p.omega_m - 4.0 * p.g * p.g));
  CHECK(f.strong == doctest::Approx(expected));

  CoolingParams floor = p;
  floor.n_th = 0.0;
  floor.g = 1e-9;
  CHECK(final_occupancy_formulas(floor).weak ==
        doctest::Approx(p.kappa * p.kappa / (16.0 * p.omega_m * p.omega_m)).epsilon(1e-9));

  CoolingParams unstable = p;
  unstable.g = p.omega_m / 2.0;
  CHECK_FALSE(final_occupancy_formulas(unstable).strong_valid);
  CHECK(std::isnan(final_occupancy_formulas(unstable).strong));
}

TEST_CASE("stability and cooperativity diagnostics") {
  const auto s = stability_and_cooperativity(cooling_set(1000.0));
  CHECK(s.stable);
  CHECK(s.cooperativity == doctest::Approx(4.0 * 16e3 * 16e3 / (6e3 * 3.2)));
  CHECK(s.cooperativity == doctest::Approx(5.33e4).epsilon(1e-3));
  CHECK(s.high_cooperativity);
  CHECK(s.sideband_ratio == doctest::Approx(320.0 / 6.0));
  CHECK(s.sideband_resolved);

  CoolingParams edge = cooling_set(1.0);
  edge.g = edge.omega_m / 2.0;
  CHECK_FALSE(stability_and_cooperativity(edge).stable);

  CoolingParams closed = cooling_set(1.0);
  closed.kappa = 0.0;
  CHECK(stability_and_cooperativity(closed).cooperativity_infinite);
  CHECK(std::isinf(stability_and_cooperativity(closed).cooperativity));

  CoolingParams beyond = cooling_set(1.0);
  beyond.g = 0.6 * beyond.omega_m;
  CHECK_THROWS_AS(steady_moments(beyond), NumericalError);
}

TEST_CASE("coupling sign does not change occupations") {
  const auto p = cooling_set(20.0);
  auto q = p;
  q.g = -p.g;
  MomentState m0;
  m0.n_b = 20.0;
  std::vector<double> times;
  for (int k = 0; k <= 40; ++k) times.push_back(1e-6 * k);
  const auto a = evolve_moments(p, m0, times);
  const auto b = evolve_moments(q, m0, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    CHECK(b.series.at(k, "n_b") == doctest::Approx(a.series.at(k, "n_b")).epsilon(1e-9));
    CHECK(b.series.at(k, "n_a") == doctest::Approx(a.series.at(k, "n_a")).epsilon(1e-9));
  }
  CHECK(steady_moments(q).n_b == doctest::Approx(steady_moments(p).n_b).epsilon(1e-12));
}

TEST_CASE("moment dynamics stay physical and relax to the steady state") {
  const auto p = cooling_set(2.0);
  MomentState m0;
  m0.n_b = 2.0;
  const double t_end = 10.0 / slowest_decay_rate(p);
  std::vector<double> times;
  for (int k = 0; k <= 100; ++k) times.push_back(t_end * k / 100.0);
  const auto traj = evolve_moments(p, m0, times);
  CHECK(traj.min_occupation >= -1e-9);
  CHECK(traj.max_cauchy_schwarz_excess <= 1e-9);
  const auto ss = steady_moments(p);
  CHECK(traj.final_state.n_b == doctest::Approx(ss.n_b).epsilon(1e-6));
  CHECK(traj.final_state.n_a == doctest::Approx(ss.n_a).epsilon(1e-6));
}

TEST_CASE("ground-state entry in the cooling regime") {
  const auto p = cooling_set(1000.0);
  MomentState m0;
  m0.n_b = 1000.0;
  std::vector<double> times;
  for (int k = 0; k <= 300; ++k) times.push_back(1e-6 * k);
  const auto traj = evolve_moments(p, m0, times);
  bool entered = false;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] >= 30e-6 && traj.series.at(k, "n_b") < 1.0) entered = true;
  }
  CHECK(entered);
  // Without coupling the beam stays hot.
  auto off = p;
  off.g = 0.0;
  CHECK(evolve_moments(off, m0, times).final_state.n_b > 999.0);
}

TEST_CASE("two-mode bases") {
  const auto prod = TwoModeBasis::product({3, 4});
  CHECK(prod.dim() == 12);
  CHECK(prod.layout().dimension("mech") == 4);
  const auto exc = TwoModeBasis::excitation_limited(4);
  CHECK(exc.dim() == 15);
  CHECK_THROWS_AS(TwoModeBasis::product({1, 4}), std::invalid_argument);

  for (const auto* basis : {&prod, &exc}) {
    const auto& a = basis->a().matrix();
    const auto& b = basis->b().matrix();
    // The two modes commute exactly; [b, b^dag] = 1 away from the edge.
    CHECK((a * b - b * a).cwiseAbs().maxCoeff() < 1e-14);
    const Eigen::MatrixXcd comm = b * b.adjoint() - b.adjoint() * b;
    for (std::size_t k = 0; k < basis->dim(); ++k) {
      const auto& o = basis->occupations()[k];
      const bool edge = basis == &prod ? o[1] + 1 == 4 : o[0] + o[1] == 4;
      const auto i = static_cast<Eigen::Index>(k);
      if (!edge) CHECK(comm(i, i).real() == doctest::Approx(1.0));
    }
  }

  // Thermal beam: geometric weights, renormalized over the kept levels.
  const auto rho = exc.thermal_beam_state(0.5, 2);
  const double r = 0.5 / 1.5;
  const double z = 1.0 + r + r * r;
  const auto m = moments_of(exc, rho.matrix());
  CHECK(m.n_b == doctest::Approx((r + 2.0 * r * r) / z).epsilon(1e-14));
  CHECK(m.n_a == 0.0);
  CHECK(exc.boundary_population(rho.matrix()) == 0.0);
  CHECK(exc.boundary_population(exc.thermal_beam_state(0.5).matrix()) ==
        doctest::Approx(std::pow(r, 4) / (1.0 + r + r * r + r * r * r + r * r * r * r)));
}

TEST_CASE("master equation trajectory matches the moment trajectory") {
  // Short window of the resonant swap with a small basis; the full 200 us
  // comparison runs in the acceptance suite.
  const auto p = cooling_set(2.0);
  const auto basis = TwoModeBasis::excitation_limited(16);
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(1e-6 * k);
  quantum::EvolveOptions opts;
  opts.rtol = 1e-8;
  opts.atol = 1e-10;
  const auto rep = compare_moment_and_master_dynamics(p, 2.0, basis, times, opts, 9);
  CHECK(rep.max_relative_deviation < 1e-4);
  CHECK(rep.max_boundary_population < 1e-5);
  CHECK(rep.invariants.within(opts.tolerances));
}

TEST_CASE("moment and master-equation steady states agree") {
  const CoolingParams base = cooling_set(2.0);
  const auto report = cooling_me_crosscheck(base, {0.1, 0.5, 1.0, 2.0, 5.0}, TwoModeBasis::product({8, 8}));
  CHECK(report.max_relative_deviation < 0.01);
  CHECK(report.points.size() == 5);
  // Cooling strengthens with g in the weak regime.
  CHECK(report.points[1].n_b_moments < report.points[0].n_b_moments);
  CHECK(report.points[2].n_b_moments < report.points[1].n_b_moments);

  CoolingParams hot = base;
  hot.n_th = 40.0;
  CHECK_THROWS_AS(cooling_me_crosscheck(hot, {0.1}, TwoModeBasis::product({4, 4})), NumericalError);
}
