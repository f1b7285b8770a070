#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "hybridsim/errors.hpp"
#include "hybridsim/interface/effective.hpp"
#include "hybridsim/interface/transfer.hpp"
#include "hybridsim/interface/tripartite.hpp"
#include "hybridsim/quantum/states.hpp"

using namespace hybridsim;
using namespace hybridsim::interface;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

TripartiteParams resonant(double omega, double g, double lambda, InterfaceCutoffs c = {3, 3}) {
  TripartiteParams p;
  p.omega_plus = p.omega_m = p.delta = omega;
  p.g = g;
  p.lambda = lambda;
  p.cutoffs = c;
  return p;
}

TripartiteParams transfer_set(double noise_scale = 1.0) {
  TripartiteParams p = resonant(0.0, 1.8, 1.0, {10, 6});
  p.kappa = 0.1;
  p.gamma_m = 1e-4 * noise_scale;
  p.n_th = 1000.0;
  p.gamma_s = 0.1;
  return p;
}

// Indices of composite states with exactly one excitation.
std::vector<Eigen::Index> single_excitation_indices(const quantum::HilbertLayout& layout) {
  const Eigen::MatrixXcd n = excitation_number(layout).matrix();
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < n.rows(); ++i) {
    if (std::abs(n(i, i).real() - 1.0) < 1e-12) idx.push_back(i);
  }
  return idx;
}

}  // namespace

TEST_CASE("tripartite Hamiltonian structure") {
  auto p = resonant(0.0, 0.0, 0.0);
  p.omega_plus = 2.2;
  p.omega_m = 0.7;
  p.delta = 1.3;
  const auto h0 = build_tripartite_hamiltonian(p);
  const auto layout = h0.layout();
  CHECK(h0.matrix().isDiagonal(0.0));
  for (std::size_t i = 0; i < layout.total_dim(); ++i) {
    const auto lv = layout.unravel(i);
    const double ms = lv[0] == 0 ? 1.0 : -1.0;  // sigma_z eigenvalue
    const double e = 0.5 * ms * p.omega_plus + lv[1] * p.omega_m + lv[2] * p.delta;
    CHECK(h0.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real() == doctest::Approx(e));
  }

  p.g = 0.4;
  p.lambda = 0.3;
  const auto h = build_tripartite_hamiltonian(p);
  CHECK(h.hermiticity_error() < 1e-14);
  const auto n = excitation_number(layout);
  CHECK(quantum::commutator(h, n).matrix().cwiseAbs().maxCoeff() < 1e-14);

  TripartiteParams bad = p;
  bad.cutoffs.cavity = 1;
  CHECK_THROWS_AS(build_tripartite_hamiltonian(bad), std::invalid_argument);
  bad = p;
  bad.kappa = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("single-excitation spectrum at resonance is Omega, Omega +- sqrt(g^2 + lambda^2)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  const double omega = 5.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double g = u(rng), lambda = u(rng);
    const auto p = resonant(omega, g, lambda);
    const auto ev = single_excitation_spectrum(p);
    const double c = std::hypot(g, lambda);
    CHECK(std::abs(ev(0) - (omega - c)) < 1e-10 * omega);
    CHECK(std::abs(ev(1) - omega) < 1e-10 * omega);
    CHECK(std::abs(ev(2) - (omega + c)) < 1e-10 * omega);

    // same block cut out of the full Hamiltonian
    const auto h = build_tripartite_hamiltonian(p);
    const auto idx = single_excitation_indices(h.layout());
    REQUIRE(idx.size() == 3);
    Eigen::Matrix3cd block;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) block(i, j) = h.matrix()(idx[i], idx[j]);
    Eigen::Vector3d full = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd>(block).eigenvalues();
    full.array() += 0.5 * omega;  // ground energy -omega_+/2
    CHECK((full - ev).cwiseAbs().maxCoeff() < 1e-10 * omega);
  }
}

TEST_CASE("polariton basis limits") {
  const auto layout = tripartite_layout({3, 3});
  const auto a = quantum::destroy(layout, "cav");
  const auto sm = quantum::spin_ops(layout, "spin").sigma_minus;

  auto pb = polariton_basis(1.0, 0.0, 2.0, layout);
  CHECK(pb.theta == doctest::Approx(0.0));
  CHECK((pb.dark.matrix() - sm.matrix()).cwiseAbs().maxCoeff() < 1e-15);

  pb = polariton_basis(0.0, 1.0, 2.0, layout);
  CHECK(pb.theta == doctest::Approx(std::numbers::pi / 2));
  CHECK((pb.dark.matrix() + a.matrix()).cwiseAbs().maxCoeff() < 1e-15);

  pb = polariton_basis(0.8, 0.8, 2.0, layout);
  CHECK(pb.theta == doctest::Approx(std::numbers::pi / 4));
  CHECK(pb.omega_plus == doctest::Approx(2.0 + std::sqrt(2.0) * 0.8));
  CHECK(pb.omega_minus == doctest::Approx(2.0 - std::sqrt(2.0) * 0.8));

  CHECK_THROWS_AS(polariton_basis(0.0, 0.0, 1.0, layout), std::invalid_argument);
}

TEST_CASE("dark polariton decouples from the beam for any mixing angle") {
  const auto layout = tripartite_layout({3, 3});
  const auto vac = tripartite_vacuum(layout);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double g = u(rng), lambda = u(rng);
    const auto pb = polariton_basis(g, lambda, 0.0, layout);
    const auto h_int = interaction_hamiltonian(g, lambda, layout);
    CHECK(dark_polariton_check(pb, h_int) < 1e-12);
    const Eigen::VectorXcd bright = pb.bright.adjoint().matrix() * vac;
    CHECK((h_int.matrix() * bright).norm() == doctest::Approx(std::hypot(g, lambda)).epsilon(1e-12));
  }
  for (int k = 0; k <= 24; ++k) {
    const double theta = std::numbers::pi * k / 24.0;
    const double g = std::cos(theta), lambda = std::sin(theta);
    CHECK(dark_polariton_check(polariton_basis(g, lambda, 0.0, layout), interaction_hamiltonian(g, lambda, layout)) <
          1e-12);
  }
}

TEST_CASE("dark polariton and polarons are orthonormal single-excitation eigenvectors") {
  const auto layout = tripartite_layout({3, 3});
  const auto vac = tripartite_vacuum(layout);
  const double omega = 3.0, g = 0.7, lambda = 1.1;
  const auto h = build_tripartite_hamiltonian(resonant(omega, g, lambda));
  const auto pb = polariton_basis(g, lambda, omega, layout);
  Eigen::MatrixXcd v(vac.size(), 3);
  v.col(0) = pb.dark.adjoint().matrix() * vac;
  v.col(1) = pb.polaron_plus.adjoint().matrix() * vac;
  v.col(2) = pb.polaron_minus.adjoint().matrix() * vac;
  CHECK((v.adjoint() * v - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff() < 1e-14);
  const double e0 = -0.5 * omega;
  const double e[3] = {pb.omega, pb.omega_plus, pb.omega_minus};
  for (int k = 0; k < 3; ++k) {
    const Eigen::VectorXcd r = h.matrix() * v.col(k) - (e0 + e[k]) * v.col(k);
    CHECK(r.norm() < 1e-12);
  }
}

TEST_CASE("dissipation-free Rabi exchange follows the three-level oracle") {
  const auto p = resonant(kTwoPi * 320e3, kTwoPi * 16e3, kTwoPi * 12e3);
  RabiOptions o;
  o.t_max = 200e-6;
  o.samples = 101;
  o.dissipation = false;
  o.n_m0 = 0.0;
  o.evolve.rtol = 1e-10;
  o.evolve.atol = 1e-12;
  const auto r = rabi_scenario(p, o);

  // exp(-i H t) on the one-excitation block, spin first
  Eigen::Matrix3cd h;
  h << 0.0, p.lambda, 0.0, p.lambda, 0.0, p.g, 0.0, p.g, 0.0;
  double worst = 0.0, n_exc_drift = 0.0;
  for (std::size_t k = 0; k < r.series.size(); ++k) {
    const double t = r.series.times()[k];
    const Eigen::Matrix3cd u = (cplx(0.0, -t) * h).exp();
    worst = std::max(worst, std::abs(r.series.at(k, "P_spin") - std::norm(u(0, 0))));
    worst = std::max(worst, std::abs(r.series.at(k, "n_b") - std::norm(u(1, 0))));
    worst = std::max(worst, std::abs(r.series.at(k, "n_a") - std::norm(u(2, 0))));
    n_exc_drift = std::max(n_exc_drift, std::abs(r.series.at(k, "n_exc") - 1.0));
  }
  CHECK(worst < 1e-7);
  CHECK(n_exc_drift < 1e-8);
  CHECK(r.invariants.within(o.evolve.tolerances));

  REQUIRE(r.photon_distribution.size() == 3);
  double total = 0.0;
  for (double x : r.photon_distribution) total += x;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  const Eigen::Matrix3cd u_half = (cplx(0.0, -r.t_half) * h).exp();
  CHECK(r.photon_distribution[1] == doctest::Approx(std::norm(u_half(2, 0))).epsilon(1e-6));
}

TEST_CASE("excitation number is conserved with thermal beam and no dissipation") {
  auto p = resonant(0.0, 1.0, 0.8, {6, 4});
  RabiOptions o;
  o.t_max = 20.0;
  o.samples = 81;
  o.dissipation = false;
  o.n_m0 = 0.3;
  o.evolve.rtol = 1e-10;
  o.evolve.atol = 1e-12;
  const auto r = rabi_scenario(p, o);
  const auto n = r.series.column("n_exc");
  for (double x : n) CHECK(std::abs(x - n.front()) < 1e-8);

  p.lambda = 0.0;
  const auto frozen = rabi_scenario(p, o);
  for (double x : frozen.series.column("P_spin")) CHECK(std::abs(x - 1.0) < 1e-10);
}

TEST_CASE("Rabi scenario at the device parameters with dissipation") {
  TripartiteParams p = resonant(kTwoPi * 320e3, kTwoPi * 16e3, kTwoPi * 16e3, {6, 4});
  p.kappa = kTwoPi * 6e3;
  p.gamma_m = kTwoPi * 3.2;
  p.n_th = 1000.0;
  p.gamma_s = kTwoPi * 2e3;
  RabiOptions o;
  o.t_max = 150e-6;
  o.samples = 301;
  const auto r = rabi_scenario(p, o);
  CHECK(r.invariants.within(o.evolve.tolerances));
  const auto n_a = r.series.column("n_a");
  const auto p_spin = r.series.column("P_spin");
  CHECK(*std::max_element(n_a.begin(), n_a.end()) > 0.3);  // excitation reaches the cavity
  CHECK(p_spin.back() < 0.6);                               // damped
  CHECK(r.t_half == doctest::Approx(std::numbers::pi / (std::sqrt(2.0) * p.g)));
  CHECK(!r.photon_distribution.empty());
}

TEST_CASE("populations depend only on rates times time") {
  TripartiteParams p = resonant(0.0, 1.0, 0.7, {4, 3});
  p.kappa = 0.1;
  p.gamma_m = 0.01;
  p.n_th = 2.0;
  p.gamma_s = 0.05;
  RabiOptions o;
  o.t_max = 10.0;
  o.samples = 41;
  o.evolve.rtol = 1e-10;
  o.evolve.atol = 1e-12;
  const auto r1 = rabi_scenario(p, o);

  const double s = 2.0 * std::numbers::pi * 1e4;
  TripartiteParams q = p;
  for (double* x : {&q.g, &q.lambda, &q.kappa, &q.gamma_m, &q.gamma_s}) *x *= s;
  RabiOptions o2 = o;
  o2.t_max /= s;
  const auto r2 = rabi_scenario(q, o2);
  for (const char* col : {"P_spin", "n_a", "n_b"}) {
    const auto a = r1.series.column(col), b = r2.series.column(col);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-8);
  }
}

TEST_CASE("counter-rotating terms are a small correction when omega_m >> g") {
  auto rwa = resonant(50.0, 1.0, 1.0, {4, 4});
  auto full = rwa;
  full.counter_rotating = true;
  const auto layout = tripartite_layout(rwa.cutoffs);
  // the rotating-wave Hamiltonian conserves the excitation number; the added
  // a^dag b^dag terms do not, so the two runs must differ slightly
  const auto h = build_tripartite_hamiltonian(rwa);
  CHECK(quantum::commutator(h, excitation_number(layout)).matrix().cwiseAbs().maxCoeff() < 1e-14);

  RabiOptions o;
  o.t_max = 6.0;
  o.samples = 61;
  o.dissipation = false;
  o.n_m0 = 0.0;
  const auto a = rabi_scenario(rwa, o).series.column("P_spin");
  const auto b = rabi_scenario(full, o).series.column("P_spin");
  double diff = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) diff = std::max(diff, std::abs(a[k] - b[k]));
  CHECK(diff > 1e-6);
  CHECK(diff < 0.02);
}

TEST_CASE("pulse schedule validation") {
  PulseSchedule s = PulseSchedule::gaussian_from_peak(1.8, 4.0);
  CHECK(s.t_end == doctest::Approx(std::sqrt(4.0 * std::log(1e6))));
  CHECK(s.at(s.t_end) == doctest::Approx(1.8e-6));
  CHECK_NOTHROW(s.validate(1.0));
  CHECK_THROWS_AS(s.validate(2.0), ConfigError);  // g(t_start) <= lambda

  PulseSchedule early = s;
  early.t_start = -8.0;
  CHECK_THROWS_AS(early.validate(1.0), ConfigError);

  // window too short: g(t_end) still above lambda
  PulseSchedule short_window = s;
  short_window.t_end = 0.5;
  try {
    stirap_transfer(transfer_set(), short_window);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("window too short") != std::string::npos);
    CHECK(std::string(e.what()).find("dtheta/dt") != std::string::npos);
  }

  auto off = transfer_set();
  off.omega_m = 0.1;
  CHECK_THROWS_AS(stirap_transfer(off, s), ConfigError);
}

TEST_CASE("STIRAP reaches the adiabatic limit set by the initial mixing angle") {
  TripartiteParams p = resonant(0.0, 0.0, 1.0, {4, 3});
  StirapOptions o;
  o.n_m0 = 0.0;
  o.evolve.check_positivity = false;

  // g0 = 1.8 lambda leaves the spin only cos^2(theta0) dark at t = 0; a slow
  // ramp then delivers (1 + cos theta0)/2.
  const double theta0 = std::atan(1.0 / 1.8);
  const auto slow = stirap_transfer(p, PulseSchedule::gaussian_from_peak(1.8, 256.0), o);
  CHECK(slow.fidelity == doctest::Approx(0.5 * (1.0 + std::cos(theta0))).epsilon(0.005));
  CHECK(slow.max_adiabaticity < 0.06);

  // strong initial coupling and a slow ramp: near-perfect transfer
  const auto strong = stirap_transfer(p, PulseSchedule::gaussian_from_peak(20.0, 64.0), o);
  CHECK(strong.fidelity > 0.99);
  CHECK(std::abs(std::abs(strong.optimal_phase) - std::numbers::pi) < 0.05);  // P_d -> -a
  CHECK(strong.final_mixing_angle > 1.5);
  CHECK(strong.invariants.within(o.evolve.tolerances));
}

TEST_CASE("STIRAP at the reference transfer parameters") {
  StirapOptions o;
  o.evolve.check_positivity = false;
  const auto s = PulseSchedule::gaussian_from_peak(1.8, 4.0);

  auto clean = transfer_set();
  clean.kappa = clean.gamma_m = clean.gamma_s = 0.0;
  const auto r0 = stirap_transfer(clean, s, o);
  CHECK(r0.fidelity > 0.95);
  CHECK(r0.fidelity > r0.fidelity_unmaximized);

  const auto r = stirap_transfer(transfer_set(), s, o);
  CHECK(r.fidelity > 0.7);
  CHECK(r.fidelity < r0.fidelity);
  CHECK(r.series.size() == o.samples);
  CHECK(r.series.at(0, "theta") == doctest::Approx(std::atan(1.0 / 1.8)));
  CHECK(r.cavity_state.trace().real() == doctest::Approx(1.0).epsilon(1e-9));

  PulseSchedule frozen = s;
  frozen.shape = PulseSchedule::Shape::constant;
  const auto f = stirap_transfer(clean, frozen, o);
  CHECK(f.fidelity < 0.9);
}

TEST_CASE("effective parameters") {
  TripartiteParams p = resonant(0.0, 1.0, 1.0);
  p.omega_m = 10.0;
  p.kappa = 0.02;
  p.gamma_m = 0.003;
  p.n_th = 7.0;
  const auto e = effective_params(p);
  CHECK(e.g_eff == 0.1 * p.g);
  CHECK(e.delta1 == 10.0);
  CHECK(e.delta2 == 0.0);
  CHECK(e.kappa_eff1 - p.kappa == doctest::Approx(e.beta * e.beta * (p.n_th + 1.0) * p.gamma_m).epsilon(1e-15));
  CHECK(e.kappa_eff2 == doctest::Approx(e.beta * e.beta * p.n_th * p.gamma_m));
  CHECK(e.gamma_eff1 == doctest::Approx(e.alpha * e.alpha * (p.n_th + 1.0) * p.gamma_m));
  CHECK(e.gamma_eff2 == doctest::Approx(e.alpha * e.alpha * p.n_th * p.gamma_m));
  CHECK(e.adiabatic);

  TripartiteParams q = resonant(0.0, kTwoPi * 60e3, kTwoPi * 40e3);
  q.omega_m = kTwoPi * 300e3;
  const double geff_khz = effective_params(q).g_eff / kTwoPi / 1e3;
  CHECK(geff_khz == doctest::Approx(8.0));
  CHECK(geff_khz > 5.0);
  CHECK(geff_khz < 15.0);  // quoted as ~10 kHz

  q.lambda = 0.0;
  CHECK(effective_params(q).g_eff == 0.0);
  q.omega_m = q.omega_plus;
  CHECK_THROWS_AS(effective_params(q), std::invalid_argument);

  const auto m = build_effective_model(e, 4);
  CHECK(m.dim() == 8);
  CHECK(m.collapse_terms().size() == 4);  // gamma_s = 0 skipped
}

TEST_CASE("effective model tracks the full model as the detuning grows") {
  double previous = 1.0;
  for (double detuning : {10.0, 30.0}) {
    TripartiteParams p = resonant(0.0, 1.0, 1.0);
    p.omega_m = detuning;
    const auto e = effective_params(p);
    const auto c = effective_vs_full_comparison(p, std::numbers::pi / e.g_eff, 401);
    CHECK(c.max_trace_distance < 0.1);
    CHECK(c.max_trace_distance < previous);
    previous = c.max_trace_distance;
    CHECK(c.rabi_frequency == doctest::Approx(2.0 * e.g_eff).epsilon(0.05));
    CHECK(c.max_trace_distance_unmapped > 0.5);  // sign convention matters for coherences
    CHECK(c.full_invariants.within(quantum::EvolveOptions{}.tolerances));
    CHECK(c.effective_invariants.within(quantum::EvolveOptions{}.tolerances));
  }
}

TEST_CASE("effective model with weak dissipation") {
  TripartiteParams p = resonant(0.0, 1.0, 1.0);
  p.omega_m = 10.0;
  p.kappa = p.gamma_s = 1e-3;
  p.gamma_m = 1e-3;
  p.n_th = 1.0;
  const auto e = effective_params(p);
  const auto c = effective_vs_full_comparison(p, std::numbers::pi / e.g_eff, 201);
  CHECK(c.max_trace_distance < 0.1);
  CHECK(c.spin_population_full.back() > 0.8);  // back near |-1> after one period
}

TEST_CASE("Rabi fit recovers a cosine with and without a fast ripple") {
  for (double ripple : {0.0, 0.002}) {
    std::vector<double> t, pop;
    for (int k = 0; k <= 200; ++k) {
      t.push_back(0.05 * k);
      pop.push_back(0.5 * (1.0 + std::cos(1.3 * t.back())) + ripple * std::sin(40.0 * t.back()));
    }
    CHECK(fit_rabi_frequency(t, pop) == doctest::Approx(1.3).epsilon(ripple == 0.0 ? 1e-3 : 0.02));
  }
  CHECK_THROWS_AS(fit_rabi_frequency({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}), NumericalError);
}
